"""Python bindings for the corelab representation-analysis library.

Command-style helpers return the JSON report as a dict (with an added
``exit_code`` key); matrix helpers take and return numpy complex arrays.
"""

import json as _json

from ._corelab import (  # noqa: F401
    AnalysisError,
    ParseError,
    algebra_dims,
    minimal_cyclic_coinvariant,
    version,
)
from . import _corelab as _core

__all__ = [
    "AnalysisError",
    "ParseError",
    "algebra_dims",
    "dilate",
    "equiv",
    "minimal_cyclic_coinvariant",
    "report",
    "structure",
    "validate",
    "version",
]

__version__ = version().split()[-1]


def validate(path):
    return _json.loads(_core.validate_file(str(path)))


def structure(path, seed=1234, m=None):
    return _json.loads(_core.structure_file(str(path), seed, list(m or [])))


def equiv(path_a, path_b, seed=1234):
    return _json.loads(_core.equiv_files(str(path_a), str(path_b), seed))


def dilate(path, depth=4, check=True, seed=1234):
    return _json.loads(_core.dilate_file(str(path), depth, check, seed))


def report(path, depth=4, seed=1234):
    return _json.loads(_core.report_file(str(path), depth, seed))
