"""Degraded text challenge generation.

A challenge is built on a white canvas in four fixed steps: gray shadows
for every character, random dark lines crossing the text region, the
characters again in ink shifted left off their shadows, then salt-and-
pepper noise. One seeded generator drives all random choices in that
order, so an instance is a pure function of its spec.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

from .errors import SpecError
from .glyphs import GlyphAtlas, default_atlas, render_text
from .imgcore import RasterImage, Rng, add_salt_pepper, draw_line

ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True)
class CaptchaSpec:
    """Generation parameters. Defaults give a 200x60 four-letter challenge."""

    text: str
    seed: int
    canvas: tuple[int, int] = (200, 60)
    shadow_intensity: int = 160
    ink_intensity: int = 0
    shift: tuple[int, int] = (-6, 0)
    line_count_range: tuple[int, int] = (2, 4)
    noise_density: float = 0.05
    font_id: int = 0
    scale: int = 2
    origin: tuple[int, int] = (20, 14)
    spacing: int = 40

    def __post_init__(self):
        if not self.text or any(c not in ALPHABET for c in self.text):
            raise SpecError(f"text must match [A-Z]+, got {self.text!r}")
        if not 0.0 <= self.noise_density <= 1.0:
            raise SpecError(f"noise_density must be in [0, 1], got {self.noise_density}")
        if self.shadow_intensity <= self.ink_intensity:
            raise SpecError("shadow_intensity must exceed ink_intensity")
        lo, hi = self.line_count_range
        if lo < 0 or hi < lo:
            raise SpecError(f"bad line_count_range {self.line_count_range}")

    def to_json_dict(self) -> dict:
        """Flat dict with list-valued pairs, for JSON serialization."""
        d = asdict(self)
        for key in ("canvas", "shift", "line_count_range", "origin"):
            d[key] = list(d[key])
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "CaptchaSpec":
        kwargs = dict(d)
        for key in ("canvas", "shift", "line_count_range", "origin"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)


@dataclass(frozen=True)
class CaptchaInstance:
    spec: CaptchaSpec
    image: RasterImage
    truth: str = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "truth", self.spec.text)
        if (self.image.width, self.image.height) != self.spec.canvas:
            raise SpecError("image dimensions do not match spec canvas")


def random_text(rng: Rng, length: int) -> str:
    """Uniform uppercase text of the given length."""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    return "".join(ALPHABET[rng.next_below(26)] for _ in range(length))


def generate(spec: CaptchaSpec, atlas: GlyphAtlas | None = None) -> CaptchaInstance:
    """Render a challenge instance from its spec.

    Randomness (line count, line endpoints, noise) comes from a single
    generator seeded with spec.seed; the consumption order is fixed, so
    the same spec always produces a byte-identical image.
    """
    if atlas is None:
        atlas = default_atlas()
    w, h = spec.canvas
    rng = Rng(spec.seed)
    img = RasterImage.blank(w, h)

    try:
        img = render_text(atlas, spec.text, spec.font_id, spec.origin,
                          spec.spacing, spec.scale, spec.shadow_intensity, img)
    except Exception as exc:
        raise SpecError(f"shadow placement failed: {exc}") from exc

    lo, hi = spec.line_count_range
    n_lines = lo + rng.next_below(hi - lo + 1)
    third = w // 3
    for _ in range(n_lines):
        x0 = rng.next_below(third)
        y0 = rng.next_below(h)
        x1 = w - third + rng.next_below(third)
        y1 = rng.next_below(h)
        img = draw_line(img, (x0, y0), (x1, y1), spec.ink_intensity)

    main_at = (spec.origin[0] + spec.shift[0], spec.origin[1] + spec.shift[1])
    try:
        img = render_text(atlas, spec.text, spec.font_id, main_at,
                          spec.spacing, spec.scale, spec.ink_intensity, img)
    except Exception as exc:
        raise SpecError(f"character placement failed: {exc}") from exc

    img = add_salt_pepper(img, spec.noise_density, rng)
    return CaptchaInstance(spec=spec, image=img)
