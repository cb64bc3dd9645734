"""Atlas parsing/validation and text rendering."""

import numpy as np
import pytest

from captchalab.errors import AtlasError, RenderError
from captchalab.glyphs import (
    GLYPH_HEIGHT,
    GLYPH_WIDTH,
    default_atlas,
    parse_atlas,
    render_text,
)
from captchalab.imgcore import RasterImage, threshold_below, connected_components


def tiny_atlas_text(skip=None, rows_override=None):
    """A complete synthetic atlas where every glyph is a solid block."""
    chunks = ["# synthetic test atlas"]
    block = ["#" * GLYPH_WIDTH] * GLYPH_HEIGHT
    for font_id in (0, 1):
        for ch in "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz":
            if skip == (ch, font_id):
                continue
            rows = rows_override.get((ch, font_id), block) if rows_override else block
            chunks.append(f"glyph {ch} {font_id}")
            chunks.extend(rows)
    return "\n".join(chunks) + "\n"


class TestParse:
    def test_bundled_atlas_complete(self):
        atlas = default_atlas()
        assert len(atlas) == 104
        for (_, _), glyph in atlas.items():
            assert glyph.bitmap.width == GLYPH_WIDTH
            assert glyph.bitmap.height == GLYPH_HEIGHT
            assert glyph.bitmap.ink_count >= 1

    def test_missing_glyph_named_in_error(self):
        with pytest.raises(AtlasError, match="missing Q/1"):
            parse_atlas(tiny_atlas_text(skip=("Q", 1)))

    def test_wrong_row_width(self):
        rows = ["#" * (GLYPH_WIDTH + 1)] + ["#" * GLYPH_WIDTH] * (GLYPH_HEIGHT - 1)
        with pytest.raises(AtlasError, match="row must be"):
            parse_atlas(tiny_atlas_text(rows_override={("A", 0): rows}))

    def test_duplicate_glyph(self):
        text = tiny_atlas_text()
        text += "glyph A 0\n" + "\n".join(["#" * GLYPH_WIDTH] * GLYPH_HEIGHT) + "\n"
        with pytest.raises(AtlasError, match="duplicate"):
            parse_atlas(text)

    def test_empty_glyph_rejected(self):
        rows = ["." * GLYPH_WIDTH] * GLYPH_HEIGHT
        with pytest.raises(AtlasError, match="no ink"):
            parse_atlas(tiny_atlas_text(rows_override={("A", 0): rows}))

    def test_ink_leading_rows_not_comments(self):
        # A glyph row may start with '#'; it must parse as bitmap data.
        rows = ["#" + "." * (GLYPH_WIDTH - 1)] * GLYPH_HEIGHT
        atlas = parse_atlas(tiny_atlas_text(rows_override={("A", 0): rows}))
        assert atlas.get("A", 0).bitmap.ink_count == GLYPH_HEIGHT


class TestRender:
    def test_empty_string_is_noop(self):
        atlas = default_atlas()
        canvas = RasterImage.blank(100, 40)
        assert render_text(atlas, "", 0, (5, 5), 20, 1, 0, canvas) == canvas

    def test_single_glyph_ink_count(self):
        atlas = default_atlas()
        out = render_text(atlas, "A", 0, (0, 0), 20, 1, 0, RasterImage.blank(40, 40))
        assert (out.pixels == 0).sum() == atlas.get("A", 0).bitmap.ink_count

    def test_spacing_between_glyph_clusters(self):
        atlas = default_atlas()
        out = render_text(atlas, "AB", 0, (4, 4), 40, 1, 0, RasterImage.blank(100, 30))
        segs = connected_components(threshold_below(out, 128))
        lefts = sorted(s.left for s in segs)
        a_mask = atlas.get("A", 0).bitmap.mask
        b_mask = atlas.get("B", 0).bitmap.mask
        a_left = 4 + int(np.nonzero(a_mask.any(axis=0))[0].min())
        b_left = 44 + int(np.nonzero(b_mask.any(axis=0))[0].min())
        assert lefts == sorted([a_left, b_left])

    def test_unknown_character(self):
        with pytest.raises(RenderError):
            render_text(default_atlas(), "A1", 0, (0, 0), 20, 1, 0, RasterImage.blank(80, 30))

    def test_out_of_bounds_placement(self):
        with pytest.raises(RenderError):
            render_text(default_atlas(), "AB", 0, (0, 0), 60, 2, 0, RasterImage.blank(80, 40))

    def test_concatenation_equals_two_renders(self):
        atlas = default_atlas()
        canvas = RasterImage.blank(140, 30)
        whole = render_text(atlas, "XYZ", 1, (2, 3), 40, 1, 0, canvas)
        first = render_text(atlas, "XY", 1, (2, 3), 40, 1, 0, canvas)
        both = render_text(atlas, "Z", 1, (82, 3), 40, 1, 0, first)
        assert whole == both

    def test_only_glyph_cells_change(self):
        atlas = default_atlas()
        canvas = RasterImage.blank(40, 40, 200)
        out = render_text(atlas, "Q", 0, (3, 3), 20, 2, 0, canvas)
        changed = out.pixels != canvas.pixels
        scaled = np.kron(atlas.get("Q", 0).bitmap.mask, np.ones((2, 2), dtype=bool))
        inside = changed[3:3 + scaled.shape[0], 3:3 + scaled.shape[1]]
        assert changed.sum() == inside.sum()
        assert (inside <= scaled).all()
