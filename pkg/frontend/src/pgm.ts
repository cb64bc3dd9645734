/** Binary PGM (P5) decoding, pixel-for-pixel with the server's encoder. */

export interface GrayImage {
  width: number;
  height: number;
  /** Row-major intensities, 0 = black ink, 255 = white background. */
  pixels: Uint8Array;
}

function isSpace(byte: number): boolean {
  return byte === 0x20 || byte === 0x09 || byte === 0x0a || byte === 0x0d;
}

/** Read the next whitespace-delimited header token, skipping '#' comments. */
function readToken(data: Uint8Array, pos: number): { token: string; next: number } {
  while (pos < data.length) {
    if (data[pos] === 0x23) {
      // comment runs to end of line
      while (pos < data.length && data[pos] !== 0x0a) pos++;
    } else if (isSpace(data[pos])) {
      pos++;
    } else {
      break;
    }
  }
  const start = pos;
  while (pos < data.length && !isSpace(data[pos])) pos++;
  if (start === pos) throw new Error("truncated PGM header");
  return { token: String.fromCharCode(...data.slice(start, pos)), next: pos };
}

export function decodePgm(data: Uint8Array): GrayImage {
  if (data.length < 2 || data[0] !== 0x50 || data[1] !== 0x35) {
    throw new Error("not a binary PGM (P5)");
  }
  let pos = 2;
  const fields: number[] = [];
  for (let i = 0; i < 3; i++) {
    const { token, next } = readToken(data, pos);
    const value = Number(token);
    if (!Number.isInteger(value)) throw new Error(`bad PGM header token '${token}'`);
    fields.push(value);
    pos = next;
  }
  const [width, height, maxval] = fields;
  if (width < 1 || height < 1) throw new Error(`bad PGM dimensions ${width}x${height}`);
  if (maxval !== 255) throw new Error(`unsupported maxval ${maxval}`);
  pos += 1; // the single whitespace byte after maxval
  const payload = data.slice(pos, pos + width * height);
  if (payload.length !== width * height) {
    throw new Error(`truncated PGM payload (${payload.length}/${width * height})`);
  }
  return { width, height, pixels: payload };
}

/** Expand grayscale to RGBA for a canvas ImageData buffer. */
export function toRgba(img: GrayImage): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(new ArrayBuffer(img.width * img.height * 4));
  for (let i = 0; i < img.pixels.length; i++) {
    const v = img.pixels[i];
    out[i * 4] = v;
    out[i * 4 + 1] = v;
    out[i * 4 + 2] = v;
    out[i * 4 + 3] = 255;
  }
  return out;
}
