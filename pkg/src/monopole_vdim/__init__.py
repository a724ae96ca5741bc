"""Virtual dimensions of monopole moduli spaces on manifolds with scattering ends.

The main entry points are :func:`monopole_vdim.indicial.bspec` for the
indicial roots of a boundary surface and :func:`monopole_vdim.index.vdim`
for the weighted index; ``monopole-vdim`` is the command-line front end.
"""

__version__ = "0.1.0"
