import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from pouisim.loader import load_params, validate_params  # noqa: E402

REFERENCE_CFG = ROOT / "example" / "reference" / "reference.cfg"


# a network small enough to run a few dozen steps in well under a second
@pytest.fixture
def small_params():
    return validate_params({
        "target_workers": 20,
        "initial_workers": 10,
        "steps": 30,
        "seed": 7,
        "job_arrival_per_step": 8,
        "num_posters": 4,
        "num_coordinators": 2,
        "initial_validators": 5,
    })


@pytest.fixture
def reference_cfg():
    return REFERENCE_CFG


@pytest.fixture
def reference_params():
    return load_params(REFERENCE_CFG, environ={})
