"""Cavity QED for condensed-matter systems: the free electron gas coupled to
cavity modes, its linear response, the continuum effective field theory, and
QED-Bloch theory (Landau polaritons, Hofstadter butterflies, polaritonic
fractal spectra)."""

__version__ = "0.1.0"
