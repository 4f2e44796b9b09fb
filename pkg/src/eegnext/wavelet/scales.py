"""Scale-set construction: linear integer scales or dyadic voices."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import BadScaleConfig

MODE_LINEAR = "linear"
MODE_DYADIC = "dyadic_voices"


@dataclass(frozen=True)
class ScaleSet:
    mode: str
    max_a: float
    voices: int
    scales: tuple[float, ...]

    def __post_init__(self):
        if len(self.scales) < 1:
            raise BadScaleConfig("scale set must contain at least one scale")
        if any(a < 1 for a in self.scales):
            raise BadScaleConfig(f"all scales must be >= 1, got {min(self.scales)}")
        if max(self.scales) > self.max_a + 1e-9:
            raise BadScaleConfig(
                f"max scale {max(self.scales)} exceeds max_a {self.max_a}"
            )
        if list(self.scales) != sorted(self.scales):
            raise BadScaleConfig("scales must be sorted ascending")

    def __len__(self) -> int:
        return len(self.scales)


def make_scales(mode: str, max_a: float = 50.0, voices: int = 8) -> ScaleSet:
    """Build a ScaleSet.

    linear: integer scales 1..floor(max_a).
    dyadic_voices: a_i = 2^(i/voices) for i = voices..floor(voices*log2(max_a)).
    """
    if mode == MODE_LINEAR:
        top = math.floor(max_a + 1e-9)
        if top < 1:
            raise BadScaleConfig(f"linear mode needs max_a >= 1, got {max_a}")
        return ScaleSet(
            mode=mode, max_a=float(max_a), voices=voices,
            scales=tuple(float(a) for a in range(1, top + 1)),
        )
    if mode == MODE_DYADIC:
        if max_a < 2:
            raise BadScaleConfig(f"dyadic mode needs max_a >= 2, got {max_a}")
        if voices < 2:
            raise BadScaleConfig(f"voices must be >= 2, got {voices}")
        i_hi = math.floor(voices * math.log2(max_a) + 1e-9)
        scales = tuple(2.0 ** (i / voices) for i in range(voices, i_hi + 1))
        return ScaleSet(mode=mode, max_a=float(max_a), voices=voices, scales=scales)
    raise BadScaleConfig(f"unknown scale mode {mode!r}")


def scale_set_from_values(values) -> ScaleSet:
    """Rebuild a ScaleSet from persisted scale values (container read path).

    The builder pattern (linear integers / dyadic voices) is inferred when
    it matches exactly; otherwise the values are kept verbatim under the
    linear tag.
    """
    vals = tuple(float(v) for v in values)
    if all(abs(v - (i + 1)) < 1e-6 for i, v in enumerate(vals)):
        return ScaleSet(
            mode=MODE_LINEAR, max_a=float(len(vals)), voices=8,
            scales=tuple(float(i + 1) for i in range(len(vals))),
        )
    if len(vals) >= 2:
        step = math.log2(vals[1]) - math.log2(vals[0])
        if step > 0:
            v = round(1.0 / step)
            # values may have passed through float32 storage; compare loosely
            if v >= 2:
                rebuilt = make_scales(MODE_DYADIC, max_a=vals[-1] * (1 + 1e-6), voices=v)
                if len(rebuilt.scales) == len(vals) and all(
                    abs(x - y) <= 1e-5 * y for x, y in zip(rebuilt.scales, vals)
                ):
                    return rebuilt
    return ScaleSet(mode=MODE_LINEAR, max_a=vals[-1], voices=8, scales=vals)
