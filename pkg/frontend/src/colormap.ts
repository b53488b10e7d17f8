/* Color ramps for the matrix and histogram heat views.
 *
 * Distances live in [0, 1] and the interesting structure sits near the
 * ends, so the ramp has to keep perceived lightness steps roughly even or
 * the low tail washes out.  Interpolating in Oklab gives that without a
 * lookup table: both endpoints are in-gamut sRGB and the straight line
 * between them stays close to the gamut, so a per-channel clamp after
 * conversion is enough.  Low values map to blue, high values to red.
 */

const LOW: Rgb = [0x25, 0x63, 0xeb];
const HIGH: Rgb = [0xdc, 0x26, 0x26];

type Rgb = [number, number, number];
type Lab = [number, number, number];

function srgbToLinear(c: number): number {
  const v = c / 255;
  return v <= 0.04045 ? v / 12.92 : Math.pow((v + 0.055) / 1.055, 2.4);
}

function linearToSrgb(v: number): number {
  const c = v <= 0.0031308 ? v * 12.92 : 1.055 * Math.pow(v, 1 / 2.4) - 0.055;
  return Math.min(255, Math.max(0, Math.round(c * 255)));
}

function rgbToOklab([r, g, b]: Rgb): Lab {
  const lr = srgbToLinear(r);
  const lg = srgbToLinear(g);
  const lb = srgbToLinear(b);
  const l = Math.cbrt(0.4122214708 * lr + 0.5363325363 * lg + 0.0514459929 * lb);
  const m = Math.cbrt(0.2119034982 * lr + 0.6806995451 * lg + 0.1073969566 * lb);
  const s = Math.cbrt(0.0883024619 * lr + 0.2817188376 * lg + 0.6299787005 * lb);
  return [
    0.2104542553 * l + 0.793617785 * m - 0.0040720468 * s,
    1.9779984951 * l - 2.428592205 * m + 0.4505937099 * s,
    0.0259040371 * l + 0.7827717662 * m - 0.808675766 * s,
  ];
}

function oklabToRgb([L, a, b]: Lab): Rgb {
  const l = (L + 0.3963377774 * a + 0.2158037573 * b) ** 3;
  const m = (L - 0.1055613458 * a - 0.0638541728 * b) ** 3;
  const s = (L - 0.0894841775 * a - 1.291485548 * b) ** 3;
  return [
    linearToSrgb(4.0767416621 * l - 3.3077115913 * m + 0.2309699292 * s),
    linearToSrgb(-1.2684380046 * l + 2.6097574011 * m - 0.3413193965 * s),
    linearToSrgb(-0.0041960863 * l - 0.7034186147 * m + 1.707614701 * s),
  ];
}

const LOW_LAB = rgbToOklab(LOW);
const HIGH_LAB = rgbToOklab(HIGH);

export function clamp01(x: number): number {
  if (Number.isNaN(x)) return 0;
  return Math.min(1, Math.max(0, x));
}

/** Blue (x=0) to red (x=1) through Oklab; returns a css rgb() string. */
export function ramp(x: number): string {
  const t = clamp01(x);
  const lab: Lab = [
    LOW_LAB[0] + (HIGH_LAB[0] - LOW_LAB[0]) * t,
    LOW_LAB[1] + (HIGH_LAB[1] - LOW_LAB[1]) * t,
    LOW_LAB[2] + (HIGH_LAB[2] - LOW_LAB[2]) * t,
  ];
  const [r, g, b] = oklabToRgb(lab);
  return `rgb(${r}, ${g}, ${b})`;
}

export function parseRgb(css: string): Rgb {
  const m = /^rgb\((\d+), (\d+), (\d+)\)$/.exec(css);
  if (!m) throw new Error(`not an rgb() string: ${css}`);
  return [Number(m[1]), Number(m[2]), Number(m[3])];
}

/** Rendered where a histogram cell holds no pairs; outside the ramp so
 * empty bins never read as "slightly cold". */
export const EMPTY_CELL = "rgb(20, 22, 26)";

/* Matched-fragment fill colors. Categorical, not a ramp: neighboring tiles
 * must stay tellable apart, and the same index must give the same color in
 * both panes. Mostly the Okabe-Ito palette, padded to ten. */
const FRAGMENT_PALETTE = [
  "#e69f00",
  "#56b4e9",
  "#009e73",
  "#f0e442",
  "#0072b2",
  "#d55e00",
  "#cc79a7",
  "#9467bd",
  "#8c564b",
  "#7f7f7f",
] as const;

export function fragmentColor(index: number): string {
  if (!Number.isInteger(index) || index < 0) throw new Error(`bad fragment index: ${index}`);
  return FRAGMENT_PALETTE[index % FRAGMENT_PALETTE.length];
}

export const FRAGMENT_COLOR_COUNT = FRAGMENT_PALETTE.length;
