"""Tensor isomorphism toolkit."""
