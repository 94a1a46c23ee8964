"""3D index of ideal triangulations: tetrahedron index, gluing data, index and
angle structures, lattice sums and 2-3 moves."""

__version__ = "0.1.0"
