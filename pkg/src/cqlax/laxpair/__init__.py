"""2x2 Lax pairs: catalog, gauge reduction, assembly, trajectories and zero-curvature checks."""
from .trajectory import (Potential, Trajectory, canonical_family, classical_potential, ho_trajectory_exact,
                         integrate_newton, quantum_potential, quantum_shift)
from .matrix import LaxPairBundle, MatrixField
from .catalog import catalog_pair
from .gauge import assemble_lax, gauge_matrix, gauge_reduce
from .zcc import ZCCResult, convergence_order, zcc_matrix, zcc_residual

__all__ = [
    "Potential", "Trajectory", "canonical_family", "classical_potential", "ho_trajectory_exact",
    "integrate_newton", "quantum_potential", "quantum_shift", "LaxPairBundle", "MatrixField",
    "catalog_pair", "assemble_lax", "gauge_matrix", "gauge_reduce", "ZCCResult", "convergence_order",
    "zcc_matrix", "zcc_residual",
]
