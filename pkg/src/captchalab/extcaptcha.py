"""Extended challenge: objects and words in one scene, location questions.

A challenge scatters k object sprites and m words across a canvas without
overlap, then asks l natural-language questions, each selecting one
character of one word by its spatial relation to the objects ("character
2 of the word nearest to the key"). Question text never reveals the words
themselves. The guessing-probability model quantifies the challenge: an
attacker with perfect OCR but no scene understanding must guess each
questioned character among the n distinct characters present, and one
with full question understanding still guesses among the m words.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import GenerationError
from .glyphs import GlyphAtlas, render_text
from .imgcore import BinaryImage, RasterImage, Rng, blit_bitmap, pgm_decode

CANVAS = (320, 240)
WORD_SPACING = 13  # px between glyph origins at scale 1
PLACEMENT_MARGIN = 4
MAX_ATTEMPTS = 1000

Bbox = tuple[int, int, int, int]  # left, top, width, height


@dataclass(frozen=True)
class SpriteDb:
    """Labeled object bitmaps available for scene generation."""

    entries: tuple[tuple[str, BinaryImage], ...]

    def __post_init__(self):
        labels = [label for label, _ in self.entries]
        if len(set(labels)) != len(labels):
            raise ValueError("sprite labels must be unique")
        for label, bmp in self.entries:
            if not label:
                raise ValueError("empty sprite label")
            if bmp.ink_count == 0:
                raise ValueError(f"sprite {label!r} has no ink")

    @classmethod
    def load(cls, directory: str | Path) -> "SpriteDb":
        """Read a sprite directory: manifest.json plus P5 bitmap files.

        Manifest entries are {"label": ..., "file": ...}; bitmap pixels
        below 128 count as ink.
        """
        directory = Path(directory)
        manifest = json.loads((directory / "manifest.json").read_text())
        entries = []
        for item in manifest:
            img = pgm_decode((directory / item["file"]).read_bytes())
            entries.append((item["label"], BinaryImage(img.pixels < 128)))
        return cls(entries=tuple(entries))


def default_sprites() -> SpriteDb:
    root = resources.files("captchalab.data").joinpath("sprites")
    manifest = json.loads(root.joinpath("manifest.json").read_text())
    entries = []
    for item in manifest:
        img = pgm_decode(root.joinpath(item["file"]).read_bytes())
        entries.append((item["label"], BinaryImage(img.pixels < 128)))
    return SpriteDb(entries=tuple(entries))


def default_words() -> list[str]:
    text = resources.files("captchalab.data").joinpath("words.txt").read_text()
    return load_wordlist(text)


def load_wordlist(text: str) -> list[str]:
    words = []
    for n, line in enumerate(text.splitlines(), start=1):
        word = line.strip()
        if not word or word.startswith("#"):
            continue
        if not word.isalpha() or not word.isascii():
            raise ValueError(f"wordlist line {n}: {word!r} is not a plain letter word")
        words.append(word)
    return words


def guess_probability(n: int, l: int) -> float:
    """Chance of guessing all l questioned characters among n distinct ones."""
    if n < 1:
        raise ValueError(f"need n >= 1 distinct characters, got {n}")
    if l < 0:
        raise ValueError(f"need l >= 0 questions, got {l}")
    return (1.0 / n) ** l

def word_guess_probability(m: int, l: int) -> float:
    """Guessing bound for an attacker who reads all m words but not the scene."""
    if m < 1:
        raise ValueError(f"need m >= 1 words, got {m}")
    if l < 0:
        raise ValueError(f"need l >= 0 questions, got {l}")
    return (1.0 / m) ** l


@dataclass(frozen=True)
class GuessModel:
    """Scene statistics feeding the two probability bounds."""

    n: int  # distinct characters across placed words
    l: int  # questioned characters
    m: int  # placed words

    @property
    def char_prob(self) -> float:
        return guess_probability(self.n, self.l)

    @property
    def word_prob(self) -> float:
        return word_guess_probability(self.m, self.l)


@dataclass(frozen=True)
class QuestionSpec:
    template_id: int
    params: dict
    rendered_text: str
    answer_char: str


@dataclass(frozen=True)
class ExtChallenge:
    image: RasterImage
    placed_objects: tuple[tuple[str, Bbox], ...]
    placed_words: tuple[tuple[str, Bbox], ...]
    questions: tuple[QuestionSpec, ...]
    expected_answer: str
    char_prob: float
    word_prob: float
    seed: int

    def __post_init__(self):
        if len(self.expected_answer) != len(self.questions):
            raise ValueError("one answer character per question required")

    def public_dict(self, reveal: bool = False) -> dict:
        """JSON-ready view; answers and word placements only when revealed."""
        d = {
            "seed": self.seed,
            "canvas": [self.image.width, self.image.height],
            "objects": [{"label": label, "bbox": list(bbox)}
                        for label, bbox in self.placed_objects],
            "questions": [q.rendered_text for q in self.questions],
            "char_guess_probability": self.char_prob,
            "word_guess_probability": self.word_prob,
        }
        if reveal:
            d["expected_answer"] = self.expected_answer
            d["words"] = [{"word": word, "bbox": list(bbox)}
                          for word, bbox in self.placed_words]
            d["question_details"] = [
                {"template_id": q.template_id, "params": q.params,
                 "text": q.rendered_text, "answer_char": q.answer_char}
                for q in self.questions
            ]
        return d


def check_answer(challenge: ExtChallenge, submitted: str) -> bool:
    """Case-sensitive exact match (words may be mixed case)."""
    return submitted == challenge.expected_answer


def _center(bbox: Bbox) -> tuple[float, float]:
    l, t, w, h = bbox
    return (l + w / 2.0, t + h / 2.0)


def _dist(a: tuple[float, float], b: tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


# Template ids. Ties in any geometric comparison go to the earlier-placed word.
NEAREST, FARTHEST, TOPMOST, BOTTOMMOST, LEFTMOST, RIGHTMOST, BETWEEN = range(7)

_EXTREME_KEY = {
    TOPMOST: lambda c: c[1],
    BOTTOMMOST: lambda c: -c[1],
    LEFTMOST: lambda c: c[0],
    RIGHTMOST: lambda c: -c[0],
}
_EXTREME_NAME = {TOPMOST: "topmost", BOTTOMMOST: "bottommost",
                 LEFTMOST: "leftmost", RIGHTMOST: "rightmost"}


def resolve_word_index(template_id: int, params: dict,
                       placed_objects, placed_words) -> int:
    """Index of the word a question refers to, from scene geometry alone."""
    centers = [_center(bbox) for _, bbox in placed_words]
    obj_center = {label: _center(bbox) for label, bbox in placed_objects}
    if template_id == NEAREST:
        ref = obj_center[params["object"]]
        return min(range(len(centers)), key=lambda i: (_dist(centers[i], ref), i))
    if template_id == FARTHEST:
        ref = obj_center[params["object"]]
        return min(range(len(centers)), key=lambda i: (-_dist(centers[i], ref), i))
    if template_id in _EXTREME_KEY:
        key = _EXTREME_KEY[template_id]
        return min(range(len(centers)), key=lambda i: (key(centers[i]), i))
    if template_id == BETWEEN:
        a = obj_center[params["object_a"]]
        b = obj_center[params["object_b"]]
        mid = ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)
        return min(range(len(centers)), key=lambda i: (_dist(centers[i], mid), i))
    raise ValueError(f"unknown template id {template_id}")


def resolve_answer(challenge: ExtChallenge, q: QuestionSpec) -> str:
    """Recompute a question's answer character from the stored scene."""
    idx = resolve_word_index(q.template_id, q.params,
                             challenge.placed_objects, challenge.placed_words)
    word = challenge.placed_words[idx][0]
    k = q.params.get("k", len(word))
    return word[k - 1]


def _render_question(template_id: int, params: dict) -> str:
    k = params.get("k")
    if template_id == NEAREST:
        return f"Enter character {k} of the word nearest to the {params['object']}."
    if template_id == FARTHEST:
        return f"Enter character {k} of the word farthest from the {params['object']}."
    if template_id in _EXTREME_NAME:
        return f"Enter character {k} of the {_EXTREME_NAME[template_id]} word."
    if template_id == BETWEEN:
        return (f"Enter the last character of the word between the "
                f"{params['object_a']} and the {params['object_b']}.")
    raise ValueError(f"unknown template id {template_id}")


def _sample_distinct(rng: Rng, pool_size: int, count: int) -> list[int]:
    remaining = list(range(pool_size))
    picked = []
    for _ in range(count):
        picked.append(remaining.pop(rng.next_below(len(remaining))))
    return picked


def _place(rng: Rng, size: tuple[int, int], taken: list[Bbox],
           canvas: tuple[int, int], what: str) -> Bbox:
    w, h = size
    cw, ch = canvas
    if w > cw or h > ch:
        raise GenerationError(f"{what} ({w}x{h}) larger than the canvas")
    for _ in range(MAX_ATTEMPTS):
        x = rng.next_below(cw - w + 1)
        y = rng.next_below(ch - h + 1)
        box = (x, y, w, h)
        pad = PLACEMENT_MARGIN
        clear = all(x + w + pad <= ol or ol + ow + pad <= x
                    or y + h + pad <= ot or ot + oh + pad <= y
                    for ol, ot, ow, oh in taken)
        if clear:
            taken.append(box)
            return box
    raise GenerationError(f"could not place {what} after {MAX_ATTEMPTS} attempts")


def generate_challenge(db: SpriteDb, wordlist: list[str], atlas: GlyphAtlas,
                       seed: int, k_objects: int = 4, m_words: int = 8,
                       l_questions: int = 5) -> ExtChallenge:
    """Build a scene, its questions, and the guessing probabilities.

    All placement and question choices derive from one generator seeded
    with `seed`; the same inputs reproduce the identical challenge.
    """
    if k_objects < 1 or len(db.entries) < k_objects:
        raise ValueError(f"need at least {k_objects} sprites, have {len(db.entries)}")
    if m_words < 1 or len(wordlist) < m_words:
        raise ValueError(f"need at least {m_words} words, have {len(wordlist)}")
    if l_questions < 0:
        raise ValueError("l_questions must be >= 0")

    rng = Rng(seed)
    obj_picks = _sample_distinct(rng, len(db.entries), k_objects)
    word_picks = _sample_distinct(rng, len(wordlist), m_words)
    objects = [db.entries[i] for i in obj_picks]
    words = [wordlist[i] for i in word_picks]

    img = RasterImage.blank(*CANVAS)
    taken: list[Bbox] = []
    placed_objects = []
    for label, bitmap in objects:
        box = _place(rng, (bitmap.width, bitmap.height), taken, CANVAS, f"object {label}")
        img = blit_bitmap(img, bitmap, (box[0], box[1]), 0, scale=1)
        placed_objects.append((label, box))

    placed_words = []
    for word in words:
        w = WORD_SPACING * (len(word) - 1) + 12
        box = _place(rng, (w, 16), taken, CANVAS, "word slot")
        img = render_text(atlas, word, 0, (box[0], box[1]), WORD_SPACING, 1, 0, img)
        placed_words.append((word, box))

    templates = [TOPMOST, BOTTOMMOST, LEFTMOST, RIGHTMOST]
    if k_objects >= 1:
        templates = [NEAREST, FARTHEST] + templates
    if k_objects >= 2:
        templates.append(BETWEEN)

    questions = []
    answer_chars = []
    for _ in range(l_questions):
        template_id = templates[rng.next_below(len(templates))]
        params = {}
        if template_id in (NEAREST, FARTHEST):
            params["object"] = placed_objects[rng.next_below(k_objects)][0]
        elif template_id == BETWEEN:
            a = rng.next_below(k_objects)
            b = rng.next_below(k_objects - 1)
            if b >= a:
                b += 1
            params["object_a"] = placed_objects[a][0]
            params["object_b"] = placed_objects[b][0]
        word_idx = resolve_word_index(template_id, params, placed_objects, placed_words)
        word = placed_words[word_idx][0]
        if template_id == BETWEEN:
            k = len(word)
        else:
            k = 1 + rng.next_below(len(word))
            params["k"] = k
        q = QuestionSpec(template_id=template_id, params=params,
                         rendered_text=_render_question(template_id, params),
                         answer_char=word[k - 1])
        questions.append(q)
        answer_chars.append(word[k - 1])

    stats = GuessModel(n=len(set("".join(words))), l=l_questions, m=m_words)
    return ExtChallenge(
        image=img,
        placed_objects=tuple(placed_objects),
        placed_words=tuple(placed_words),
        questions=tuple(questions),
        expected_answer="".join(answer_chars),
        char_prob=stats.char_prob,
        word_prob=stats.word_prob,
        seed=seed,
    )
