"""Value range of the chordal Loewner equation at i under a driver bound |lam| <= c."""

from .curves import (BoundaryCurve, BoundaryPoint, ValueRangeBoundary, assemble_boundary,
                     curve_l1, curve_l2, curve_l3, curve_l7, theorem1_point,
                     unrestricted_boundary, unrestricted_polygon)
from .dynamics import (AdjointState, ConstantDriver, DrivingFunction, ExtremalFollow,
                       Horizon, PhaseState, conserved_drift, constant_driver_endpoint,
                       extremal_schedule, hamiltonian, integrate_full_hamiltonian,
                       integrate_phase, integrate_two_pole, lambda_star, phase_trajectory)
from .errors import (DomainError, LoewnerError, RootFindingError, ScheduleError,
                     StitchingError, SwallowError)
from .roots import (RegimeParams, SwitchRoots, bracket_root, solve_C0, solve_p0,
                    solve_switch_roots, solve_Y0)
from .verify import (DriverSampler, SampleReport, bang_bang_escape, containment_audit,
                     extremal_sharpness, point_in_boundary, pontryagin_spot_check,
                     sample_reachable)

__version__ = "0.1.0"
