"""Test suite for markov-shap."""
