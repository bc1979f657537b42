"""Exact census of cusps and maximal unipotent subgroups for SL_n over
S-integer rings of function fields of genus <= 1 curves over F_q."""

__version__ = "0.1.0"
