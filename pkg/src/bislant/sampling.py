"""Seeded point sampling.

The generator is xorshift64* (Vigna 2016): 64-bit state ``s``, step
``s ^= s >> 12; s ^= s << 25; s ^= s >> 27``, output ``s * 0x2545F4914F6CDD1D``.
Uniform doubles take the top 53 output bits.  The seed is mixed with
splitmix64 first so that small seeds (0, 1, 2, ...) do not give correlated
streams.  Everything is integer arithmetic masked to 64 bits, so streams are
identical on every platform.
"""

_MASK = (1 << 64) - 1


def _splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class XorShift64Star:
    def __init__(self, seed):
        state = _splitmix64(int(seed) & _MASK)
        self.state = state or 0x9E3779B97F4A7C15

    def next_u64(self):
        s = self.state
        s ^= s >> 12
        s ^= (s << 25) & _MASK
        s ^= s >> 27
        self.state = s
        return (s * 0x2545F4914F6CDD1D) & _MASK

    def uniform(self, lo=0.0, hi=1.0):
        r = (self.next_u64() >> 11) * (1.0 / (1 << 53))
        return lo + (hi - lo) * r


def sample_box(domain, n, seed, margin=1e-3):
    """``n`` points uniform in ``domain`` shrunk by ``margin`` on every side."""
    rng = XorShift64Star(seed)
    boxes = [(lo + margin, hi - margin) for lo, hi in domain]
    for lo, hi in boxes:
        if not lo < hi:
            raise ValueError(f"domain interval too small for margin {margin}")
    return [tuple(rng.uniform(lo, hi) for lo, hi in boxes) for _ in range(n)]
