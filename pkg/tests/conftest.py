import random

import pytest

from fdia import protocol
from fdia.groups import GroupContext


@pytest.fixture(scope="session")
def ctx():
    return GroupContext("toy")


@pytest.fixture(scope="session")
def system():
    """One toy deployment: params, master key, vendor and two edge servers."""
    rng = random.Random(0xFD1A)
    params, msk = protocol.setup("toy", m=16, rng=rng)
    av = protocol.av_keygen(params, msk, b"vendor-1")
    es1 = protocol.es_keygen(params, msk, b"edge-1")
    es2 = protocol.es_keygen(params, msk, b"edge-2")
    return params, msk, av, es1, es2


@pytest.fixture(scope="session")
def tagged_file(system):
    params, _, av, _, _ = system
    rng = random.Random(0xF11E)
    data = rng.randbytes(120)
    return data, protocol.tag_gen(params, av, data, b"file-alpha", rng=rng)


@pytest.fixture()
def rng():
    return random.Random(1234)
