/**
 * Minimal deterministic RGBA rasterizer: pixels, lines, markers and
 * bitmap text, encoded to PNG via pngjs.
 */

import { PNG } from "pngjs";

import { GLYPH_HEIGHT, GLYPH_SPACING, GLYPH_WIDTH, glyphColumns, textWidth } from "./font.js";
import type { MarkerKind, Rgb } from "./style.js";

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array;

  constructor(width: number, height: number, background: Rgb) {
    this.width = width;
    this.height = height;
    this.data = new Uint8Array(width * height * 4);
    for (let i = 0; i < width * height; i++) {
      this.data[4 * i] = background.r;
      this.data[4 * i + 1] = background.g;
      this.data[4 * i + 2] = background.b;
      this.data[4 * i + 3] = 255;
    }
  }

  setPixel(x: number, y: number, color: Rgb): void {
    x = Math.round(x);
    y = Math.round(y);
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = 4 * (y * this.width + x);
    this.data[i] = color.r;
    this.data[i + 1] = color.g;
    this.data[i + 2] = color.b;
    this.data[i + 3] = 255;
  }

  /** Bresenham line with optional thickness (square brush). */
  line(x0: number, y0: number, x1: number, y1: number, color: Rgb, thickness = 1): void {
    let ax = Math.round(x0);
    let ay = Math.round(y0);
    const bx = Math.round(x1);
    const by = Math.round(y1);
    const dx = Math.abs(bx - ax);
    const dy = -Math.abs(by - ay);
    const sx = ax < bx ? 1 : -1;
    const sy = ay < by ? 1 : -1;
    let err = dx + dy;
    const r = Math.floor(thickness / 2);
    for (;;) {
      for (let oy = -r; oy <= r; oy++) {
        for (let ox = -r; ox <= r; ox++) {
          this.setPixel(ax + ox, ay + oy, color);
        }
      }
      if (ax === bx && ay === by) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        ax += sx;
      }
      if (e2 <= dx) {
        err += dx;
        ay += sy;
      }
    }
  }

  fillRect(x: number, y: number, w: number, h: number, color: Rgb): void {
    for (let yy = y; yy < y + h; yy++) {
      for (let xx = x; xx < x + w; xx++) {
        this.setPixel(xx, yy, color);
      }
    }
  }

  marker(x: number, y: number, kind: MarkerKind, size: number, color: Rgb): void {
    if (kind === "none") return;
    if (kind === "circle") {
      for (let oy = -size; oy <= size; oy++) {
        for (let ox = -size; ox <= size; ox++) {
          if (ox * ox + oy * oy <= size * size) this.setPixel(x + ox, y + oy, color);
        }
      }
    } else if (kind === "square") {
      this.fillRect(Math.round(x) - size, Math.round(y) - size, 2 * size + 1, 2 * size + 1, color);
    } else {
      this.line(x - size, y - size, x + size, y + size, color, 2);
      this.line(x - size, y + size, x + size, y - size, color, 2);
    }
  }

  /** Draw text with the 5x7 font; (x, y) is the top-left corner. */
  text(x: number, y: number, content: string, color: Rgb, scale = 1): void {
    let cx = Math.round(x);
    const cy = Math.round(y);
    for (const ch of content) {
      const columns = glyphColumns(ch);
      for (let col = 0; col < GLYPH_WIDTH; col++) {
        for (let row = 0; row < GLYPH_HEIGHT; row++) {
          if ((columns[col] >> row) & 1) {
            this.fillRect(cx + col * scale, cy + row * scale, scale, scale, color);
          }
        }
      }
      cx += (GLYPH_WIDTH + GLYPH_SPACING) * scale;
    }
  }

  /** Text centered horizontally on x. */
  textCentered(x: number, y: number, content: string, color: Rgb, scale = 1): void {
    this.text(x - textWidth(content, scale) / 2, y, content, color, scale);
  }

  /** Text right-aligned so it ends at x. */
  textRight(x: number, y: number, content: string, color: Rgb, scale = 1): void {
    this.text(x - textWidth(content, scale), y, content, color, scale);
  }

  /** Text rotated 90 degrees counter-clockwise, centered vertically on y. */
  textVertical(x: number, y: number, content: string, color: Rgb, scale = 1): void {
    const w = textWidth(content, scale);
    let cy = Math.round(y + w / 2);
    const cx = Math.round(x);
    for (const ch of content) {
      const columns = glyphColumns(ch);
      for (let col = 0; col < GLYPH_WIDTH; col++) {
        for (let row = 0; row < GLYPH_HEIGHT; row++) {
          if ((columns[col] >> row) & 1) {
            this.fillRect(cx + row * scale, cy - (col + 1) * scale, scale, scale, color);
          }
        }
      }
      cy -= (GLYPH_WIDTH + GLYPH_SPACING) * scale;
    }
  }

  /** Deterministic PNG encoding (fixed filter and compression settings). */
  toPng(): Buffer {
    const png = new PNG({ width: this.width, height: this.height });
    Buffer.from(this.data).copy(png.data);
    return PNG.sync.write(png, { deflateLevel: 9, deflateStrategy: 0, filterType: 0 });
  }
}
