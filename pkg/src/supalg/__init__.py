"""Finite multiparameter supergroups over F_p: Hopf superalgebras, cohomology,
varieties of supergroup homomorphisms and characteristic classes."""

__version__ = "0.1.0"
