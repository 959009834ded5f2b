"""Exact toolkit for the k-norm unit balls rho(d, k) = conv(cross-polytope, cube/k) and their polars.

The numeric kernels behind Monte Carlo sampling and batch norm evaluation run
under numba by default; set ``POLYBALL_BACKEND=numpy`` to use plain numpy.
"""
from .combinatorics import *  # noqa: F401,F403
from .combinatorics import __all__ as _comb_all
from .exact import *  # noqa: F401,F403
from .exact import __all__ as _exact_all
from .face_lattice import *  # noqa: F401,F403
from .face_lattice import __all__ as _lattice_all
from .norms import *  # noqa: F401,F403
from .norms import __all__ as _norms_all
from .oracle import *  # noqa: F401,F403
from .oracle import __all__ as _oracle_all
from .volume import *  # noqa: F401,F403
from .volume import __all__ as _volume_all
from ._kernels import BACKEND, knorm_rows

__version__ = "0.1.0"
__all__ = [*_exact_all, *_norms_all, *_comb_all, *_lattice_all, *_volume_all, *_oracle_all,
           "BACKEND", "knorm_rows"]
