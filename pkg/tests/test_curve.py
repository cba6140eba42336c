import random

import pytest

from fdia.curve import PRESETS, TypeACurve


@pytest.fixture(scope="module")
def curve():
    return TypeACurve.from_preset("toy")


@pytest.fixture(scope="module")
def base(curve):
    # deterministic non-identity subgroup point
    x = 9000
    while True:
        pt = curve.point_from_x(x, 0)
        if pt is not None:
            pt = curve.clear_cofactor(pt)
            if pt is not None:
                return pt
        x += 1


def test_preset_consistency():
    for name, p in PRESETS.items():
        assert (p["q"] + 1) == p["h"] * p["r"], name
        assert p["q"] % 4 == 3, name


def test_unknown_preset_rejected():
    with pytest.raises(ValueError):
        TypeACurve.from_preset("enormous")


def test_generator_has_prime_order(curve, base):
    assert curve.is_on_curve(base)
    assert curve.mul(base, curve.r) is None
    assert curve.mul(base, 1) == base


def test_add_mul_consistency(curve, base):
    # scalar ladder agrees with repeated addition
    acc = None
    for k in range(1, 30):
        acc = curve.add(acc, base)
        assert acc == curve.mul(base, k)


def test_mul_matches_naive_double_and_add(curve, base):
    rng = random.Random(5)
    for _ in range(10):
        k = rng.randrange(1, int(curve.r))
        naive = None
        add = base
        kk = k
        while kk:
            if kk & 1:
                naive = curve.add(naive, add)
            add = curve.add(add, add)
            kk >>= 1
        assert curve.mul(base, k) == naive


def test_negation_and_identity(curve, base):
    assert curve.add(base, curve.neg(base)) is None
    assert curve.add(base, None) == base
    assert curve.mul(base, 0) is None


def test_subgroup_check_rejects_low_order_points(curve):
    # a random curve point before cofactor clearing is almost surely outside
    x = 31337
    while True:
        raw = curve.point_from_x(x, 1)
        if raw is not None and not (curve.mul(raw, curve.r) is None):
            break
        x += 1
    assert not curve.in_subgroup(raw)
    cleared = curve.clear_cofactor(raw)
    assert curve.in_subgroup(cleared)


def test_pairing_non_degenerate(curve, base):
    assert curve.pairing(base, base) != curve.GT_ONE


def test_pairing_identity_absorbs(curve, base):
    assert curve.pairing(base, None) == curve.GT_ONE
    assert curve.pairing(None, base) == curve.GT_ONE


def test_pairing_bilinear_and_symmetric(curve, base):
    rng = random.Random(7)
    e_gg = curve.pairing(base, base)
    for _ in range(15):
        x = rng.randrange(1, int(curve.r))
        y = rng.randrange(1, int(curve.r))
        px, py = curve.mul(base, x), curve.mul(base, y)
        lhs = curve.pairing(px, py)
        assert lhs == curve.gt_pow(e_gg, x * y)
        assert lhs == curve.pairing(py, px)


def test_pairing_output_in_target_subgroup(curve, base):
    v = curve.pairing(base, curve.mul(base, 12345))
    assert curve.gt_is_valid(v)
    assert curve.gt_pow(v, curve.r) == curve.GT_ONE


def test_gt_inverse_is_conjugate(curve, base):
    v = curve.pairing(base, base)
    assert curve.fq2_mul(v, curve.gt_inv(v)) == curve.GT_ONE


def test_pure_int_fallback_agrees_with_gmpy2():
    # blocking gmpy2 exercises the plain-int code path; results must match
    import subprocess
    import sys

    code = (
        "import sys\n"
        "sys.modules['gmpy2'] = None\n"
        "from fdia.curve import TypeACurve, HAS_GMPY2\n"
        "assert not HAS_GMPY2\n"
        "c = TypeACurve.from_preset('toy')\n"
        "x = 9000\n"
        "pt = None\n"
        "while pt is None:\n"
        "    cand = c.point_from_x(x, 0)\n"
        "    if cand is not None:\n"
        "        pt = c.clear_cofactor(cand)\n"
        "    x += 1\n"
        "assert c.in_subgroup(pt)\n"
        "v = c.pairing(c.mul(pt, 7), c.mul(pt, 11))\n"
        "assert v == c.gt_pow(c.pairing(pt, pt), 77)\n"
        "print(int(v[0]), int(v[1]))\n"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, check=True).stdout.split()
    curve = TypeACurve.from_preset("toy")
    x = 9000
    pt = None
    while pt is None:
        cand = curve.point_from_x(x, 0)
        if cand is not None:
            pt = curve.clear_cofactor(cand)
        x += 1
    want = curve.pairing(curve.mul(pt, 7), curve.mul(pt, 11))
    assert (int(out[0]), int(out[1])) == (int(want[0]), int(want[1]))
