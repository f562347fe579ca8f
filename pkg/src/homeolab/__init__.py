"""Exact conjugacy invariants for PL homeomorphisms of [0, 1] and the circle,
witness-measure sampling experiments, and spectral data of generalized
permutation unitaries."""

__version__ = "0.1.0"
