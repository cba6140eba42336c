"""Group context and protocol-level group primitives.

A GroupContext bundles a prime-order pairing group (see curve.py), its
generator, the domain-separated hash functions H1/H2 into the group and
H3 out of the target group, the PRF over Z_p, and the canonical byte
encodings that every signature and digest in the protocol is computed
over.  All operations are pure given the context, so contexts and
elements can be shared freely across threads.

Canonical encodings (normative, they feed H3 and the signatures):

* scalar:     fixed-width big-endian, width = bytelen(p)
* G1 element: 1 prefix byte (0x00 identity / 0x02 even y / 0x03 odd y)
              followed by x as fixed-width big-endian, width = bytelen(q)
* Gt element: 1 prefix byte (0x02 even / 0x03 odd imaginary part)
              followed by the real part, width = bytelen(q); valid target
              group elements have norm 1 so the imaginary part is
              recovered as sqrt(1 - a^2) with the recorded parity
"""

import hashlib
import secrets

from .curve import TypeACurve, InvalidPointError, mpz

# Domain separation labels.  H1/H2 are the protocol's random oracles into
# the group, HSIG/HMSG serve the signature layer, H3 digests target-group
# elements, PRF keys the block-coefficient function, GEN fixes the
# generator derivation.
LABEL_H1 = b"fdia/h1"
LABEL_H2 = b"fdia/h2"
LABEL_HSIG = b"fdia/hsig"
LABEL_HMSG = b"fdia/hmsg"
LABEL_H3 = b"fdia/h3"
LABEL_PRF = b"fdia/prf"
LABEL_GEN = b"fdia/generator"

H3_DIGEST_SIZE = 32

_HASH_CACHE_MAX = 1 << 16


class G1Element:
    """Element of the prime-order source group, written multiplicatively.

    ``a * b`` is the group operation, ``a ** k`` scalar exponentiation,
    ``a.inverse()`` the group inverse.  Instances are immutable.
    """

    __slots__ = ("ctx", "point", "_member")

    def __init__(self, ctx, point, _member=None):
        self.ctx = ctx
        self.point = point
        self._member = _member  # None = membership not yet established

    def is_identity(self):
        return self.point is None

    def __mul__(self, other):
        member = True if (self._member and other._member) else None
        return G1Element(self.ctx, self.ctx.curve.add(self.point, other.point), member)

    def __pow__(self, k):
        member = True if self._member else None
        return G1Element(self.ctx, self.ctx.curve.mul(self.point, int(k) % self.ctx.p), member)

    def inverse(self):
        return G1Element(self.ctx, self.ctx.curve.neg(self.point), self._member)

    def ensure_member(self):
        """Raise InvalidPointError unless the element sits in the order-p subgroup."""
        if self._member is None:
            self._member = self.ctx.curve.in_subgroup(self.point)
        if not self._member:
            raise InvalidPointError("point outside the prime-order subgroup")
        return self

    def __eq__(self, other):
        return isinstance(other, G1Element) and self.point == other.point

    def __hash__(self):
        return hash(self.point)

    def __repr__(self):
        if self.point is None:
            return "G1Element(identity)"
        return f"G1Element(x={int(self.point[0]):#x})"


class GtElement:
    """Element of the target group mu_p inside F_q2; multiplicative API."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx, value):
        self.ctx = ctx
        self.value = value

    def __mul__(self, other):
        return GtElement(self.ctx, self.ctx.curve.fq2_mul(self.value, other.value))

    def __pow__(self, k):
        return GtElement(self.ctx, self.ctx.curve.gt_pow(self.value, k))

    def inverse(self):
        return GtElement(self.ctx, self.ctx.curve.gt_inv(self.value))

    def is_one(self):
        return self.value == self.ctx.curve.GT_ONE

    def __eq__(self, other):
        return isinstance(other, GtElement) and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"GtElement(re={int(self.value[0]):#x})"


class GroupContext:
    """Pairing group of prime order p with the protocol's hash/PRF family.

    ``level`` names a parameter preset ("toy", "std", "high").  The
    generator is derived deterministically from the preset, so two
    contexts at the same level are interchangeable.
    """

    def __init__(self, level="std"):
        self.level = level
        self.curve = TypeACurve.from_preset(level)
        self.p = int(self.curve.r)
        self.scalar_bytes = self.curve.r_bytes
        self.g1_bytes = 1 + self.curve.q_bytes
        self.gt_bytes = 1 + self.curve.q_bytes
        self._hash_cache = {}
        self.g = self._derive_generator()
        self._gt_one = GtElement(self, self.curve.GT_ONE)

    def _derive_generator(self):
        g = self.hash_to_g1(LABEL_GEN, self.level.encode())
        if g.is_identity():
            raise InvalidPointError("generator derivation produced the identity")
        return g

    # --- elements ---

    def identity(self):
        return G1Element(self, None, True)

    def gt_one(self):
        return self._gt_one

    def random_scalar(self, rng=None):
        """Uniform scalar in [1, p)."""
        if rng is None:
            return 1 + secrets.randbelow(self.p - 1)
        return rng.randrange(1, self.p)

    # --- pairing ---

    def pairing(self, a, b):
        """Bilinear symmetric pairing into the target group.

        Both arguments must be subgroup members; elements produced by this
        context are, deserialized or hand-built ones are checked on first
        use.
        """
        a.ensure_member()
        b.ensure_member()
        return GtElement(self, self.curve.pairing(a.point, b.point))

    # --- hashing ---

    def hash_to_g1(self, label, msg):
        """Hash bytes onto the prime-order subgroup (try-and-increment).

        Deterministic; distinct labels give independent functions.  The
        candidate x and the y parity come from the digest, the cofactor
        multiplication lands the point in the subgroup.
        """
        key = (bytes(label), bytes(msg))
        cached = self._hash_cache.get(key)
        if cached is not None:
            return G1Element(self, cached, True)
        counter = 0
        while True:
            digest = hashlib.sha256(
                b"fdia/map|" + key[0] + b"|" + counter.to_bytes(4, "big") + b"|" + key[1]
            ).digest()
            stretch = digest + hashlib.sha256(b"fdia/map2|" + digest).digest()
            x = int.from_bytes(stretch, "big") % int(self.curve.q)
            pt = self.curve.point_from_x(x, digest[0] & 1)
            if pt is not None:
                pt = self.curve.clear_cofactor(pt)
                if pt is not None:
                    break
            counter += 1
        if len(self._hash_cache) >= _HASH_CACHE_MAX:
            self._hash_cache.clear()
        self._hash_cache[key] = pt
        return G1Element(self, pt, True)

    def hash_gt_to_bytes(self, x):
        """H3: fixed-length digest of the canonical target-group encoding."""
        return hashlib.sha256(LABEL_H3 + b"|" + self.gt_to_bytes(x)).digest()

    def prf_eval(self, key, index):
        """PRF over Z_p x Z_p -> Z_p.

        SHAKE-256 of (key, index) expanded to twice the bit length of p and
        reduced mod p, which pushes the modulo bias below 2^-|p|.
        """
        material = hashlib.shake_256(
            LABEL_PRF + b"|" + self.scalar_to_bytes(key) + self.scalar_to_bytes(index)
        ).digest(2 * self.scalar_bytes)
        return int.from_bytes(material, "big") % self.p

    # --- file block encoding ---

    @property
    def block_bytes(self):
        """Bytes per block; 8 bits of headroom keep every chunk below p."""
        return (self.p.bit_length() - 8) // 8

    def encode_file_blocks(self, data, m):
        """Split bytes into exactly m field elements (final chunk zero-padded)."""
        if m < 1:
            raise ValueError("block count must be at least 1")
        if len(data) == 0:
            raise ValueError("cannot encode an empty file")
        width = self.block_bytes
        if len(data) > m * width:
            raise ValueError(f"{len(data)} bytes do not fit in {m} blocks of {width} bytes")
        padded = bytes(data) + b"\x00" * (m * width - len(data))
        return [int.from_bytes(padded[i * width:(i + 1) * width], "big") for i in range(m)]

    def decode_file_blocks(self, blocks, length):
        """Inverse of encode_file_blocks given the original byte length."""
        width = self.block_bytes
        if length > len(blocks) * width:
            raise ValueError("stated length exceeds block capacity")
        chunks = []
        for b in blocks:
            if not 0 <= b < (1 << (8 * width)):
                raise ValueError("block value outside the encodable range")
            chunks.append(int(b).to_bytes(width, "big"))
        return b"".join(chunks)[:length]

    # --- canonical serialization ---

    def scalar_to_bytes(self, s):
        if not 0 <= s < self.p:
            raise ValueError("scalar out of range")
        return int(s).to_bytes(self.scalar_bytes, "big")

    def scalar_from_bytes(self, data):
        if len(data) != self.scalar_bytes:
            raise ValueError("bad scalar width")
        s = int.from_bytes(data, "big")
        if s >= self.p:
            raise ValueError("scalar not reduced mod p")
        return s

    def g1_to_bytes(self, el):
        width = self.curve.q_bytes
        if el.point is None:
            return b"\x00" + b"\x00" * width
        x, y = el.point
        prefix = b"\x03" if int(y) & 1 else b"\x02"
        return prefix + int(x).to_bytes(width, "big")

    def g1_from_bytes(self, data):
        width = self.curve.q_bytes
        if len(data) != 1 + width:
            raise ValueError("bad group element width")
        prefix, body = data[0], data[1:]
        if prefix == 0x00:
            if any(body):
                raise ValueError("identity encoding must be all zero")
            return self.identity()
        if prefix not in (0x02, 0x03):
            raise ValueError("bad group element prefix")
        x = int.from_bytes(body, "big")
        if x >= int(self.curve.q):
            raise ValueError("x coordinate out of range")
        pt = self.curve.point_from_x(x, prefix & 1)
        if pt is None:
            raise ValueError("x coordinate not on the curve")
        el = G1Element(self, pt, None)
        el.ensure_member()
        return el

    def gt_to_bytes(self, el):
        width = self.curve.q_bytes
        a, b = el.value
        prefix = b"\x03" if int(b) & 1 else b"\x02"
        return prefix + int(a).to_bytes(width, "big")

    def gt_from_bytes(self, data):
        width = self.curve.q_bytes
        if len(data) != 1 + width:
            raise ValueError("bad target group element width")
        prefix, body = data[0], data[1:]
        if prefix not in (0x02, 0x03):
            raise ValueError("bad target group element prefix")
        a = int.from_bytes(body, "big")
        q = int(self.curve.q)
        if a >= q:
            raise ValueError("real part out of range")
        b = self.curve.sqrt((1 - a * a) % q)
        if b is None:
            raise ValueError("encoding is not a norm-1 element")
        if int(b) & 1 != prefix & 1:
            b = (q - b) % q
        if int(b) & 1 != prefix & 1:
            raise ValueError("parity bit inconsistent with a zero imaginary part")
        return GtElement(self, (mpz(a), mpz(b)))

    def __repr__(self):
        return f"GroupContext(level={self.level!r}, p_bits={self.p.bit_length()})"
