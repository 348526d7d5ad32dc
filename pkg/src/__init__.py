"""Exact SHAP attribution for weighted automata under Markov distributions - Source package."""
