"""swarmconn: deterministic multi-robot connectivity-maintenance simulator.

Library layout:
  graph_oracle  centralized ground truth (Laplacian, Fiedler pair, 2-hop)
  pi_estimator  decentralized lambda2 estimation (power iteration + floods)
  control       connectivity / robustness / coverage contributions
  netsim        limited-range lossy radio, neighbor tables, wire format
  agent         per-robot state machine and failure injection
  harness       scenario loop, metrics, CSV output
  kernels       compiled hot kernels with pure-Python fallback
"""
from .kernels import BACKEND as kernel_backend

__version__ = "0.1.0"
__all__ = ["kernel_backend", "__version__"]
