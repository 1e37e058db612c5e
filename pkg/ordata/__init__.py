import logging
import os

import coloredlogs

home = os.path.expanduser('~')
report_path = f'{home}/.ordata/reports/'
instance_path = f'{home}/.ordata/instances/'

from logging.config import dictConfig
from ordata.common.utils import env_default

log_level = env_default('ODTA_LOG_LEVEL', 'INFO', str).upper()

logging_config = dict(
    version=1,
    disable_existing_loggers=False,
    formatters={
        'f': {'format':
              '%(asctime)s [%(levelname)-8s] %(name)-4s %(message)s',
              'datefmt': '%H:%M'}
        },
    handlers={
        'h': {'class': 'logging.StreamHandler',
              'formatter': 'f',
              'level': log_level}
        },
    root={
        'handlers': ['h'],
        'level': log_level,
        },
)

# config for coloredlogs
fmt = '%(asctime)s [%(levelname)-8s] %(name)-4s %(message)s'
datefmt = '%H:%M'

# solver and graph libraries are chatty on DEBUG
for noisy in ['networkx', 'matplotlib', 'scipy']:
    logging.getLogger(noisy).setLevel(logging.WARNING)

dictConfig(logging_config)
logger = logging.getLogger(__name__)

coloredlogs.install(level=log_level, fmt=fmt, datefmt=datefmt)

# data values are 64-bit naturals
MAX_VALUE = 2 ** 64 - 1

# budgets and caps, overridable through the environment
DEFAULT_SOLVER_BUDGET = env_default('ODTA_SOLVER_BUDGET', 5000, int)
DEFAULT_SEED = env_default('ODTA_SEED', 0, int)
DEFAULT_OUTPUT_BUDGET = 10000
DEFAULT_MEMBER_BUDGET = 200000
MAX_ZONAL_SYMBOLS = 20000
MAX_MATERIALIZED_ALPHABET = 12
