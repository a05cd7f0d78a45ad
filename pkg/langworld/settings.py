"""
Django settings for the langworld project.

Everything that changes experiment results lives in the LANGWORLD
dictionary below. Run parameters that select *what* to run come from
the command line; parameters that change *results* come from a JSON
config file validated by the schemas in each app.
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get("LANGWORLD_SECRET_KEY", "langworld-offline-benchmark")

DEBUG = False

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'langworld.world',
    'langworld.queries',
    'langworld.skills',
    'langworld.plans',
    'langworld.pcbc',
    'langworld.training',
    'langworld.evalkit',
    'langworld.cli',
]

# No database: every artifact is a file with a fixed format.
DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Logging
# https://docs.djangoproject.com/en/4.2/topics/logging/

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'langworld': {
            'handlers': ['console'],
            'level': os.environ.get('LANGWORLD_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}


# Benchmark constants

LANGWORLD = {
    # world
    'HORIZON': 500,
    'STEP_SCALE': 0.02,
    'GRASP_RADIUS': 0.04,
    'SUCCESS_RADIUS': 0.05,
    'CLOSURE_ATTACH': 0.7,
    'CLOSURE_DETACH': 0.3,
    'CLOSURE_RATE': 0.25,
    'GRASP_OFFSET': (0.0, 0.0, -0.005),
    'WORKSPACE_LOW': (-0.5, 0.3, 0.0),
    'WORKSPACE_HIGH': (0.5, 0.9, 0.4),
    'TABLE_HEIGHT': 0.0,
    'WALL_Y': 0.9,
    'TABLE_ANCHOR': (0.0, 0.6, 0.0),
    'WALL_ANCHOR': (0.0, 0.9, 0.15),
    'JOINT_OPEN_FRACTION': 0.9,
    'JOINT_CLOSED_FRACTION': 0.1,
    # query answering (meters)
    'QUERY_TOLERANCES': {
        'NEAR': 0.08,
        'SIDE': 0.02,
        'VERTICAL': 0.02,
        'ABOVE_HORIZONTAL': 0.06,
        'AROUND_HORIZONTAL': 0.03,
        'AROUND_VERTICAL': 0.03,
        'TOUCHING': 0.01,
        'ALIGNED': 0.01,
        'GRIPPER_CLOSED': 0.5,
    },
    # plan conditioning
    'ATTENTION_SCALE': 8.0,
    'LATENT_DIM': 32,
    'VOCAB_SIZE': 256,
    'HIDDEN_WIDTH': 64,
    'ACTION_SQUASH': 1.0 - 1e-6,
    # training defaults
    'TRAIN': {
        'BATCH_SIZE': 120,
        'MAX_BATCH_SIZE': 199,
        'LEARNING_RATE': 1e-3,
        'STEPS': 5000,
        'BETAS': (0.9, 0.999),
        'EPS': 1e-8,
        'LOG_EVERY': 100,
    },
    'DEMOS': {
        'ZERO_SHOT_PER_TASK': 100,
        'FEW_SHOT_PER_TASK': 10,
        'ONE_SHOT_TARGET': 1,
        'RETRY_FACTOR': 2,
        'RETRY_SLACK': 20,
    },
    'EVAL_EPISODES': 50,
    'EVAL_SEEDS': 4,
    # evaluation episodes start here so they never reuse demo seeds
    'EVAL_SEED0': 100000,
    'GRADCHECK': {
        'STEP': 1e-5,
        'TOLERANCE': 1e-4,
        'ENTRIES_PER_BLOCK': 256,
    },
    # text completion
    'COMPLETION': {
        'TEMPERATURE': 0.7,
        'MAX_TOKENS': 1024,
        'SAMPLES': 4,
        'HTTP_ENDPOINT': os.environ.get('LANGWORLD_LLM_ENDPOINT', ''),
        'HTTP_TIMEOUT': 60.0,
        'CREDENTIAL_ENV': 'LANGWORLD_LLM_API_KEY',
        'FIXTURE_DIR': BASE_DIR / 'langworld' / 'plans' / 'fixtures',
    },
    'PLAN_CORPUS_DIR': BASE_DIR / 'langworld' / 'plans' / 'corpus',
}
