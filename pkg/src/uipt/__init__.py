"""Rooted planar triangulations: exact enumeration, the type II and type III
uniform infinite planar triangulations, and a statistical test harness."""
from .exact import (TriType, DomainError, CriticalConstants, ScaledConstant, constants, phi,
                    phi_recurrence_residual, sphere_count, z_closed, z_critical,
                    z_series_partial, c_hat, c_hat_scaled, inf_face_distribution,
                    z0_power_coeff, core_size_prob, core_size_partial_sum, deg3_limit,
                    deg3_normalization, sub_prob)
from .maps import (RootedMap, MapError, validate, canonical_code, code_digest, to_text,
                   from_text, tetrahedron, double_pyramid, single_triangle, reroot)
from .census import brute_force_census, census_count, sphere_census
from .mapops import (ball, uniform_reroot, rw_reroot, rigidity_criterion, contains,
                     face_tree, FaceTree)
from .rng import ExactRng
from .samplers import (PeelEvent, PeelState, FreeSample, CoreResult, sample_uniform,
                       sample_free, peel_step_distribution, peel_once, uipt_ball,
                       core_classify, uipt_type3_ball, edge_inflate, three_connected_core)

__version__ = "0.1.0"
