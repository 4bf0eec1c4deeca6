# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
__version__ = '0.1.0'

from opineq.spectral import (HermMatrix,
                             Tolerance,
                             as_herm,
                             eig_sym,
                             apply_fn,
                             mat_pow,
                             mat_log,
                             mat_exp,
                             inverse,
                             is_pd,
                             loewner_cmp,
                             matrix_to_json,
                             matrix_from_json)
from opineq.means import (arith_mean,
                          harm_mean,
                          geo_mean,
                          specht,
                          kantorovich,
                          mu,
                          mu_combined,
                          ConstantBundle)
from opineq.majorization import (weak_majorize,
                                 majorize,
                                 topk_prod,
                                 bottomk_prod,
                                 olson_leq)
from opineq.catalog import (FunctionSpec,
                            builtin_catalog,
                            lookup,
                            resolve,
                            inline,
                            adjoint,
                            reciprocal,
                            precompose_inverse,
                            classify,
                            check_op_geodesic_convex,
                            check_op_geodesic_concave,
                            check_op_convex,
                            check_op_concave,
                            check_geom_convex_scalar,
                            is_convexlog_scalar)
from opineq.generators import (gen_pd,
                               gen_sandwich,
                               gen_olson_sandwich,
                               SandwichPair)
from opineq.checks import CheckReport, run_check, replay
from opineq.suite import SuiteConfig, load_config, run_suite
from opineq.logger import (muffle_logger,
                           reset_logger, silence_logger)
