"""Supersingular pairing-friendly curve arithmetic.

Everything here works over the curve E : y^2 = x^3 + x on F_q with
q = h*r - 1 prime, q = 3 (mod 4) and r an odd prime.  E is supersingular
with #E(F_q) = q + 1 = h*r, so the r-torsion inside E(F_q) is a cyclic
group of prime order r and the embedding degree is 2.  The modified Tate
pairing

    e(P, Q) = f_{r,P}(phi(Q)) ^ ((q^2 - 1) / r)

with the distortion map phi(x, y) = (-x, iy), i^2 = -1 in F_q2 = F_q[i],
is bilinear, non-degenerate and symmetric on the order-r subgroup.  This
is the classic "type A" setting; parameter presets of several sizes are
baked in below.

Points are affine (x, y) tuples of mpz, None is the point at infinity.
F_q2 elements are (a, b) tuples meaning a + b*i.  Scalars are plain ints.
Nothing in this module knows about protocol-level types.
"""

try:
    from gmpy2 import mpz, invert as _gmp_invert, powmod as _powmod

    HAS_GMPY2 = True

    def _invert(a, q):
        return _gmp_invert(a, q)

except ImportError:  # pure-int fallback, noticeably slower
    mpz = int
    HAS_GMPY2 = False

    def _powmod(a, e, q):
        return pow(int(a), int(e), int(q))

    def _invert(a, q):
        return pow(int(a) % int(q), int(q) - 2, int(q))


class InvalidPointError(ValueError):
    """A coordinate pair is not on the curve or not in the prime-order subgroup."""


# Fixed parameter sets: q = h*r - 1, all generated once and pinned.
# "toy" keeps unit tests and simulations fast; "std" mirrors the classic
# type-A sizes (160-bit group order, 512-bit field); "high" is for people
# who want a fatter field and do not mind the cost.
PRESETS = {
    "toy": dict(
        r=61120735562065462599670869721,
        q=265275875030249384758216682416662494095250750993747,
        h=4340194413414302102388,
    ),
    "std": dict(
        r=1364293253415769607447133093846477371787416714363,
        q=11287335629387089115282731209269892816647800114064906512897091804509490134546063054729894904590839741738488214000327944625432660412560322768977792589284803,
        h=8273394009042470384398859584014353744136546322472495823572613507602807910682018262274034358052874267447308,
    ),
    "high": dict(
        r=23039078606241393990035820618364289342048563481216045860930921077169,
        q=127509903436899470761898659141888682602135208565504995748112473842115849312630250879471962514107535325698417672463759837227071974397255211481855885153859326071672876645141402784271162936926149186044765598604470516453463764393165684661374803118286478208801185106529818539147297587252578539205001412704570918011,
        h=5534505334009166600629274067948521827795165760030666693261173480833269214007427214960448120081848651538151038848957298886334762957488419621548136301453582278627372115746748328929675728013758030833476154845894146806188813043372545713670713148,
    ),
}


class TypeACurve:
    """Arithmetic on E(F_q)[r] plus the symmetric Tate pairing into mu_r of F_q2."""

    def __init__(self, r, q, h):
        if q % 4 != 3:
            raise ValueError("field prime must be 3 mod 4")
        if (q + 1) != h * r:
            raise ValueError("group order r with cofactor h must divide q + 1")
        self.r = mpz(r)
        self.q = mpz(q)
        self.h = mpz(h)
        self.q_bytes = (int(q).bit_length() + 7) // 8
        self.r_bytes = (int(r).bit_length() + 7) // 8
        self._final_exp = (self.q + 1) // self.r
        self._r_bits = bin(int(r))[3:]  # MSB handled by loop init

    @classmethod
    def from_preset(cls, name):
        if name not in PRESETS:
            raise ValueError(f"unsupported security level {name!r}; choose one of {sorted(PRESETS)}")
        return cls(**PRESETS[name])

    # --- base field helpers ---

    def sqrt(self, a):
        """Square root in F_q for q = 3 (mod 4), or None if a is a non-residue."""
        y = _powmod(a, (self.q + 1) // 4, self.q)
        return y if y * y % self.q == a % self.q else None

    # --- affine point arithmetic ---

    def is_on_curve(self, pt):
        if pt is None:
            return True
        x, y = pt
        q = self.q
        return 0 <= x < q and 0 <= y < q and (y * y - x * x * x - x) % q == 0

    def neg(self, pt):
        if pt is None:
            return None
        x, y = pt
        return (x, (self.q - y) % self.q)

    def add(self, a, b):
        if a is None:
            return b
        if b is None:
            return a
        q = self.q
        x1, y1 = a
        x2, y2 = b
        if x1 == x2:
            if (y1 + y2) % q == 0:
                return None
            lam = (3 * x1 * x1 + 1) * _invert(2 * y1, q) % q
        else:
            lam = (y2 - y1) * _invert(x2 - x1, q) % q
        x3 = (lam * lam - x1 - x2) % q
        return (x3, (lam * (x1 - x3) - y1) % q)

    def mul(self, pt, k):
        """Scalar multiple k*pt, Jacobian ladder with a single final inversion."""
        if pt is None:
            return None
        k = int(k)
        if k < 0:
            return self.mul(self.neg(pt), -k)
        if k == 0:
            return None
        q = self.q
        x, y = pt
        acc = None  # (X, Y, Z) Jacobian
        for bit in bin(k)[2:]:
            if acc is not None:
                acc = self._jdbl(acc)
            if bit == "1":
                acc = (x, y, mpz(1)) if acc is None else self._jadd_affine(acc, x, y)
        if acc is None or acc[2] == 0:
            return None
        X, Y, Z = acc
        zi = _invert(Z, q)
        zi2 = zi * zi % q
        return (X * zi2 % q, Y * zi2 * zi % q)

    def _jdbl(self, p):
        X1, Y1, Z1 = p
        q = self.q
        if Z1 == 0 or Y1 == 0:
            return (mpz(1), mpz(1), mpz(0))
        YY = Y1 * Y1 % q
        S = 4 * X1 * YY % q
        ZZ = Z1 * Z1 % q
        M = (3 * X1 * X1 + ZZ * ZZ) % q  # curve coefficient a = 1
        X3 = (M * M - 2 * S) % q
        Y3 = (M * (S - X3) - 8 * YY * YY) % q
        return (X3, Y3, 2 * Y1 * Z1 % q)

    def _jadd_affine(self, p, x2, y2):
        X1, Y1, Z1 = p
        q = self.q
        if Z1 == 0:
            return (mpz(x2), mpz(y2), mpz(1))
        ZZ = Z1 * Z1 % q
        U2 = x2 * ZZ % q
        S2 = y2 * ZZ * Z1 % q
        H = (U2 - X1) % q
        R = (S2 - Y1) % q
        if H == 0:
            if R == 0:
                return self._jdbl(p)
            return (mpz(1), mpz(1), mpz(0))
        HH = H * H % q
        HHH = H * HH % q
        V = X1 * HH % q
        X3 = (R * R - HHH - 2 * V) % q
        Y3 = (R * (V - X3) - Y1 * HHH) % q
        return (X3, Y3, Z1 * H % q)

    def in_subgroup(self, pt):
        """Membership in the prime-order-r subgroup (identity counts as member)."""
        if pt is None:
            return True
        return self.is_on_curve(pt) and self.mul(pt, self.r) is None

    def point_from_x(self, x, parity):
        """Lift x to the curve point whose y has the requested parity, or None."""
        x = mpz(x) % self.q
        y = self.sqrt((x * x * x + x) % self.q)
        if y is None:
            return None
        if int(y) & 1 != parity:
            y = (self.q - y) % self.q
        return (x, y)

    def clear_cofactor(self, pt):
        return self.mul(pt, self.h)

    # --- F_q2 = F_q[i] helpers; elements are (a, b) = a + b*i ---

    GT_ONE = (mpz(1), mpz(0))

    def fq2_mul(self, u, v):
        q = self.q
        a, b = u
        c, d = v
        return ((a * c - b * d) % q, (a * d + b * c) % q)

    def fq2_conj(self, u):
        a, b = u
        return (a, (self.q - b) % self.q)

    def fq2_pow(self, u, e):
        q = self.q
        ra, rb = mpz(1), mpz(0)
        ba, bb = u
        e = int(e)
        while e:
            if e & 1:
                ra, rb = (ra * ba - rb * bb) % q, (ra * bb + rb * ba) % q
            ba, bb = (ba * ba - bb * bb) % q, (2 * ba * bb) % q
            e >>= 1
        return (ra, rb)

    def gt_pow(self, u, e):
        """u^e for u in mu_r; exponent reduced mod r, negatives via conjugation."""
        e = int(e) % int(self.r)
        return self.fq2_pow(u, e)

    def gt_inv(self, u):
        # mu_r elements are unitary (norm 1), so inversion is conjugation
        return self.fq2_conj(u)

    def gt_is_valid(self, u):
        a, b = u
        q = self.q
        return 0 <= a < q and 0 <= b < q and (a * a + b * b) % q == 1

    # --- the pairing ---

    def pairing(self, P, Q):
        """Modified Tate pairing e(P, Q), symmetric and bilinear on E(F_q)[r].

        Miller's loop accumulates only chord/tangent numerators: with the
        distortion map the vertical lines evaluate inside F_q and the final
        exponentiation (q^2 - 1)/r kills every F_q factor, so denominators
        are elided wholesale.
        """
        if P is None or Q is None:
            return self.GT_ONE
        q = self.q
        xq, yq = Q
        X, Y = P
        fa, fb = mpz(1), mpz(0)
        x1, y1 = X, Y
        for bit in self._r_bits:
            # tangent at T, evaluated at phi(Q) = (-xq, i*yq)
            lam = (3 * x1 * x1 + 1) * _invert(2 * y1, q) % q
            la = (lam * (xq + x1) - y1) % q
            fa, fb = (fa * fa - fb * fb) % q, (2 * fa * fb) % q
            fa, fb = (fa * la - fb * yq) % q, (fa * yq + fb * la) % q
            x3 = (lam * lam - 2 * x1) % q
            y1 = (lam * (x1 - x3) - y1) % q
            x1 = x3
            if bit == "1":
                if x1 == X:
                    if (y1 + Y) % q == 0:
                        # T = -P: the chord is vertical, evaluates in F_q,
                        # vanishes after final exponentiation.  This is the
                        # loop's last iteration (T reaches (r-1)P here).
                        break
                    lam = (3 * x1 * x1 + 1) * _invert(2 * y1, q) % q
                else:
                    lam = (Y - y1) * _invert(X - x1, q) % q
                la = (lam * (xq + x1) - y1) % q
                fa, fb = (fa * la - fb * yq) % q, (fa * yq + fb * la) % q
                x3 = (lam * lam - x1 - X) % q
                y1 = (lam * (x1 - x3) - y1) % q
                x1 = x3
        # final exponentiation: f^(q-1) via conj/inverse, then ^((q+1)/r)
        norm = _invert((fa * fa + fb * fb) % q, q)
        ia, ib = fa * norm % q, (q - fb) * norm % q
        ga, gb = (fa * ia + fb * ib) % q, (fa * ib - fb * ia) % q
        return self.fq2_pow((ga % q, gb % q), self._final_exp)
