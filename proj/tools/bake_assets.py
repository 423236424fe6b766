#!/usr/bin/env python3
"""Bakes the glyph atlas (assets/glyphs.png + glyphs.json) and the icon atlas (assets/icons.png)."""
import json
import os
import sys

from PIL import Image, ImageDraw, ImageFont

FONT = "/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf"
FONT_SIZE = 32
PAD = 2
ATLAS_WIDTH = 512
ICON = 64


def bake_glyphs(out_dir):
    font = ImageFont.truetype(FONT, FONT_SIZE)
    ascent, descent = font.getmetrics()
    chars = [chr(c) for c in range(32, 127)]
    boxes = {}
    x = y = PAD
    row_height = 0
    for ch in chars:
        left, top, right, bottom = font.getbbox(ch, anchor="la")
        w, h = max(right - left, 0), max(bottom - top, 0)
        if w == 0 or h == 0:
            w = h = 0
        if x + w + PAD > ATLAS_WIDTH:
            x = PAD
            y += row_height + PAD
            row_height = 0
        boxes[ch] = (x, y, w, h, left, top)
        x += w + PAD
        row_height = max(row_height, h)
    height = 1
    while height < y + row_height + PAD:
        height *= 2
    image = Image.new("RGBA", (ATLAS_WIDTH, height), (255, 255, 255, 0))
    mask = Image.new("L", image.size, 0)
    draw = ImageDraw.Draw(mask)
    glyphs = {}
    for ch, (gx, gy, w, h, left, top) in boxes.items():
        if w > 0 and h > 0:
            draw.text((gx - left, gy - top), ch, font=font, fill=255, anchor="la")
        glyphs[ch] = {
            "x": gx,
            "y": gy,
            "width": w,
            "height": h,
            "xOffset": left,
            "yOffset": top,
            "advance": round(font.getlength(ch), 4),
        }
    image.putalpha(mask)
    image.save(os.path.join(out_dir, "glyphs.png"))
    with open(os.path.join(out_dir, "glyphs.json"), "w") as f:
        json.dump({"fontSize": FONT_SIZE, "lineHeight": ascent + descent, "glyphs": glyphs}, f, indent=1, sort_keys=True)
        f.write("\n")


def bake_icons(out_dir):
    """2 x 2 cells: disc, square, triangle, ring. White shapes, tinted by the layer color."""
    scale = 4
    big = ICON * scale
    image = Image.new("RGBA", (2 * ICON, 2 * ICON), (255, 255, 255, 0))
    m = 6 * scale

    def cell(shape):
        mask = Image.new("L", (big, big), 0)
        d = ImageDraw.Draw(mask)
        if shape == "disc":
            d.ellipse((m, m, big - m, big - m), fill=255)
        elif shape == "square":
            d.rectangle((m + 4 * scale, m + 4 * scale, big - m - 4 * scale, big - m - 4 * scale), fill=255)
        elif shape == "triangle":
            d.polygon([(big / 2, m), (big - m, big - m), (m, big - m)], fill=255)
        else:
            d.ellipse((m, m, big - m, big - m), fill=255)
            inner = m + 8 * scale
            d.ellipse((inner, inner, big - inner, big - inner), fill=0)
        return mask.resize((ICON, ICON), Image.LANCZOS)

    for k, shape in enumerate(["disc", "square", "triangle", "ring"]):
        tile = Image.new("RGBA", (ICON, ICON), (255, 255, 255, 0))
        tile.putalpha(cell(shape))
        image.paste(tile, ((k % 2) * ICON, (k // 2) * ICON))
    image.save(os.path.join(out_dir, "icons.png"))


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "assets")
    os.makedirs(out, exist_ok=True)
    bake_glyphs(out)
    bake_icons(out)
