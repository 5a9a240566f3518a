"""Rack-aware Reed-Solomon codes with exact cross-rack bandwidth accounting.

Layers, bottom up: packed-integer field kernels (compiled or pure Python),
field towers with traces and dual bases, polynomial rings, Reed-Solomon
encode/dual/erasure machinery, good-polynomial rack partitions, the
residue-array construction, pluggable repair schemes with analytic
bandwidth prediction, a message-level cluster simulator, and a scenario
CLI.
"""

__version__ = "0.1.0"

from .errors import RackRSError
from .kernels import BACKEND

__all__ = ["RackRSError", "BACKEND", "__version__"]
