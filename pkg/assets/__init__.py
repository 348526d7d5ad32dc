"""Dagster assets for seeded engine-versus-oracle verification runs."""
