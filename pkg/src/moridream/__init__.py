"""Exact computations for Mori dream spaces given by a torus-graded polynomial ring.

The input is a degree matrix: ``n`` columns in ``Z^r`` giving the torus
weights of the variables. From it the package builds the chamber
decomposition of the effective cone, runs the minimal model program by
walking through chambers, studies relative cones over faces of a nef cone,
reads off GIT stability data, and cross-checks everything against toric
models obtained by Gale duality.
"""

from .chambers import ChamberComplex, DegreeMatrix, chamber_complex, locate_class, mov_fan
from .cones import Cone, Fan, cone_from_generators, cone_from_inequalities, membership
from .errors import MoriDreamError
from .mmp import run_mmp, replay_trace
from .relative import mdm_axiom_report, relative_context

__version__ = "0.1.0"
