"""Document loading and validation for models, distributions and instances."""
