import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from foldplan.synth import SynthParams, reference_plan, synth_garment, synth_set

from oracles import random_blob


@pytest.fixture(scope="session")
def blob_corpus():
    """Random connected test blobs, seeded once and shared across modules."""
    rng = np.random.default_rng(4242)
    return [random_blob(rng) for _ in range(200)]


@pytest.fixture(scope="session")
def class_plans():
    return {c: reference_plan(c) for c in ("short-sleeve-top", "long-sleeve-top", "trousers")}


@pytest.fixture(scope="session")
def clean_garments():
    out = {}
    for c in ("short-sleeve-top", "long-sleeve-top", "trousers"):
        out[c] = synth_garment(SynthParams(garment_class=c))
    return out


@pytest.fixture(scope="session")
def jittered_set():
    return synth_set(per_class=5, jitter=2.0, seed=100)
