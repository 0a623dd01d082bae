"""Quantum Fisher information and Cramer-Rao bounds for Mach-Zehnder phase estimation."""

from .closed_form import (
    MomentSet,
    ThetaPair,
    f_a_max,
    f_c_special,
    f_c_special_ns,
    moments_coherent,
    moments_displaced_squeezed,
    qfi_closed_form,
    qfi_from_moments,
)
from .fock import FockVector, Truncation, TruncationError, TwoModeOperator
from .optics import InputSpec, PhasePair, beam_splitter, mzi_output, prepare_input
from .qfi import (
    ARM_JACOBIAN,
    Basis,
    CramerRaoBound,
    JacobianSpec,
    ModelKind,
    QfiMatrix,
    constrained_qfi,
    crb,
    model_qfi,
    qfi_finite_difference_path,
    qfi_generator_path,
    reparametrize,
)
from .scan import ScanGrid, ScanResult, refine_max, run_scan

__version__ = "0.1.0"
