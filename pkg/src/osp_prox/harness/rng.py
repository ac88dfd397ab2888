"""SplitMix64, pinned so initial pairs are portable across implementations.

Uniform doubles use the top 53 bits: ``(z >> 11) * 2**-53``.
"""

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniforms(self, n: int) -> list:
        return [self.uniform() for _ in range(n)]


def initial_pair(seed: int, box_x, box_y):
    """Uniform in-box starting pair: x draws first, then y."""
    rng = SplitMix64(seed)
    x0 = box_x.from_unit(rng.uniforms(box_x.dim))
    y0 = box_y.from_unit(rng.uniforms(box_y.dim))
    return x0, y0
