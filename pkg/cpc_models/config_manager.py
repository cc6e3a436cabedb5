# ----------------------------------------------------------------------------
# Copyright (c) 2024-, The cpc-models development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

import json
import importlib.resources as pkg_resources


SIM_CONFIG = json.loads(pkg_resources.read_text('cpc_models',
                                                'simulator_config.json'))

TOL_UNIT = SIM_CONFIG['tolerances']['unit']
TOL_PROJ = SIM_CONFIG['tolerances']['projector']
TOL_PROB = SIM_CONFIG['tolerances']['probability']
TOL_EIG = SIM_CONFIG['tolerances']['eigenvalue_merge']

MAX_QUBITS = SIM_CONFIG['max_qubits']
DEFAULT_SEED = SIM_CONFIG['seed']
DEFAULT_CLOCK_PRECISION = SIM_CONFIG['clock_precision']
DEFAULT_WORK_BUDGET_LOG2 = SIM_CONFIG['work_budget_log2']
POWER_ITERATION_MAX = SIM_CONFIG['power_iteration']['max_iterations']
POWER_ITERATION_TOL = SIM_CONFIG['power_iteration']['tolerance']
MAX_EXACT_BITS = SIM_CONFIG['max_exact_bits']
