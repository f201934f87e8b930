#!/usr/bin/env python3
"""Render the glyph and page fixtures used by the test suites.

Fixtures are pre-rendered and committed; this script only needs to run when
the corpus changes. It requires Pillow and the DejaVu fonts that ship with
matplotlib.

Usage:
  python3 tools/make_fixtures.py --out tests/fixtures [--scan-all]

With --scan-all, every candidate letter is rendered (used to pick the
corpus); by default only the frozen corpus lists below are rendered.
"""

import argparse
import os

from PIL import Image, ImageDraw, ImageFont

try:
    import matplotlib

    FONT_DIR = os.path.join(os.path.dirname(matplotlib.__file__), "mpl-data", "fonts", "ttf")
except ImportError:  # pragma: no cover - matplotlib ships the fonts here
    FONT_DIR = "/usr/share/fonts/truetype/dejavu"

FONTS = {
    "sans": os.path.join(FONT_DIR, "DejaVuSans.ttf"),
    "serif": os.path.join(FONT_DIR, "DejaVuSerif.ttf"),
}

# Corpus letters per font, frozen after the embeddability scan: every listed
# letter embeds both bit values at both canvas sizes.
CORPUS = {
    "sans": "AEFKXYbdhkqu",
    "serif": "AEFKXYbdhkqu",
}

EXTRA = "oi"  # non-embeddable / merge-test fixtures
SIZES = (512, 256)
CAP_RATIO = 0.23  # glyph cap height relative to the canvas side

PAGE_WORDS = [
    "verification", "deterministic", "measurements", "displacement",
    "watermarking", "independent", "arrangements", "established",
    "particularly", "experimental", "installation", "translations",
    "elementary", "significant", "temperatures", "understand",
    "characteristic", "immediately", "alternatives", "quantitative",
]


def render_glyph(ch, font_path, canvas):
    size = int(CAP_RATIO * canvas * 1.36)
    font = ImageFont.truetype(font_path, size)
    img = Image.new("L", (canvas, canvas), 255)
    draw = ImageDraw.Draw(img)
    bbox = draw.textbbox((0, 0), ch, font=font)
    w, h = bbox[2] - bbox[0], bbox[3] - bbox[1]
    draw.text(((canvas - w) // 2 - bbox[0], (canvas - h) // 2 - bbox[1]), ch, font=font, fill=0)
    return img.point(lambda v: 0 if v < 128 else 255, mode="L")


def render_page(words, font_path, out_path, glyph_px=44, cell=60, line_gap=110, margin=70,
                per_line=4):
    font = ImageFont.truetype(font_path, int(glyph_px * 1.36))
    lines = [words[i:i + per_line] for i in range(0, len(words), per_line)]
    width = margin * 2 + max(sum(len(w) for w in line) + len(line) - 1 for line in lines) * cell
    height = margin * 2 + (len(lines) - 1) * line_gap + glyph_px * 2
    img = Image.new("L", (width, height), 255)
    draw = ImageDraw.Draw(img)
    for li, line in enumerate(lines):
        x = margin
        y = margin + li * line_gap
        for word in line:
            for ch in word:
                bbox = draw.textbbox((0, 0), ch, font=font)
                draw.text((x - bbox[0], y - bbox[1]), ch, font=font, fill=0)
                x += cell
            x += cell  # word gap
    img = img.point(lambda v: 0 if v < 128 else 255, mode="L")
    img.save(out_path)
    return img.size


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="tests/fixtures")
    ap.add_argument("--scan-all", action="store_true")
    args = ap.parse_args()

    glyph_dir = os.path.join(args.out, "glyphs")
    os.makedirs(glyph_dir, exist_ok=True)

    listing = []
    for font_name, font_path in FONTS.items():
        letters = (
            "ABCDEFGHIJKLMNPQRSTUVWXYZabcdefghijklmnpqrstuvwxyz"
            if args.scan_all
            else CORPUS[font_name]
        )
        for canvas in SIZES:
            for ch in letters:
                name = f"{ch}_{font_name}_{canvas}.png"
                render_glyph(ch, font_path, canvas).save(os.path.join(glyph_dir, name))
                listing.append(name)
        for ch in EXTRA:
            name = f"{ch}_{font_name}_512.png"
            render_glyph(ch, font_path, 512).save(os.path.join(glyph_dir, name))

    with open(os.path.join(args.out, "corpus.txt"), "w") as f:
        f.write("\n".join(listing) + "\n")

    page_dir = os.path.join(args.out, "pages")
    os.makedirs(page_dir, exist_ok=True)
    size = render_page(PAGE_WORDS, FONTS["sans"], os.path.join(page_dir, "words20_sans.png"))
    print(f"page words20_sans.png: {size[0]}x{size[1]}")
    print(f"{len(listing)} corpus fixtures -> {glyph_dir}")


if __name__ == "__main__":
    main()
