/** Command matching, ported to mirror the service's scoring bit for bit.
 *
 * Scores are cosine similarity over padded character-bigram counts. Counts
 * and squared norms are integers (exact in doubles up to 2^53; frames cap at
 * 256 bytes), and the only rounding happens in one sqrt and one divide, both
 * correctly rounded under IEEE 754, so scores match the server exactly and
 * the preview shown to the operator is the score the firmware will compute.
 */

export type CommandKind =
  | "Forward"
  | "Backward"
  | "Left"
  | "Right"
  | "Stop"
  | "LightOn"
  | "LightOff"
  | "HornOn"
  | "HornOff";

export type MatchMethod = "Exact" | "Fuzzy" | "NoMatch";

export interface MatchResult {
  command: CommandKind | null;
  score: number;
  method: MatchMethod;
}

export type TableEntry = readonly [CommandKind, string];

/** Order doubles as tie-break precedence: earliest entry wins equal scores. */
export const DEFAULT_TABLE: readonly TableEntry[] = [
  ["Forward", "forward"],
  ["Backward", "backward"],
  ["Left", "left"],
  ["Right", "right"],
  ["Stop", "stop"],
  ["LightOn", "light on"],
  ["LightOff", "light off"],
  ["HornOn", "horn please"],
  ["HornOff", "horn stop"],
];

export const DEFAULT_FUZZY_THRESHOLD = 0.75;

// Code points the server treats as whitespace during normalization.
const SPACE_POINTS = new Set([
  0x09, 0x0a, 0x0b, 0x0c, 0x0d, 0x1c, 0x1d, 0x1e, 0x1f, 0x20, 0x85, 0xa0,
  0x1680, 0x2028, 0x2029, 0x202f, 0x205f, 0x3000,
]);

function isSpace(ch: string): boolean {
  const cp = ch.codePointAt(0);
  if (cp === undefined) {
    return false;
  }
  return SPACE_POINTS.has(cp) || (cp >= 0x2000 && cp <= 0x200a);
}

/** Canonicalize an utterance: lowercase, keep only ASCII alphanumerics and
 * spaces, collapse whitespace runs, strip the ends. Total and idempotent. */
export function normalize(text: string): string {
  const kept: string[] = [];
  for (const ch of text.toLowerCase()) {
    if (isSpace(ch)) {
      kept.push(" ");
    } else if (("a" <= ch && ch <= "z") || ("0" <= ch && ch <= "9")) {
      kept.push(ch);
    }
  }
  return kept
    .join("")
    .split(" ")
    .filter((word) => word.length > 0)
    .join(" ");
}

function bigramCounts(text: string): Map<string, number> {
  // One space of padding on each side so word boundaries carry weight.
  const padded = ` ${text} `;
  const counts = new Map<string, number>();
  for (let i = 0; i < padded.length - 1; i++) {
    const gram = padded.slice(i, i + 2);
    counts.set(gram, (counts.get(gram) ?? 0) + 1);
  }
  return counts;
}

// Largest double below 1.0; scores this high mean "nearly identical profile".
export const JUST_BELOW_ONE = 1 - Number.EPSILON / 2;

/** Cosine similarity of character-bigram count vectors of the padded strings.
 *
 * Returns 1.0 iff the strings are equal: distinct strings can have
 * proportional bigram profiles ("ab ab" vs "ab ab ab"), so those demote to
 * just below 1.0. Symmetric and deterministic.
 */
export function similarity(a: string, b: string): number {
  if (a === b) {
    return 1.0;
  }
  if (a.length === 0 || b.length === 0) {
    return 0.0;
  }
  const ca = bigramCounts(a);
  const cb = bigramCounts(b);
  let dot = 0;
  for (const [gram, n] of ca) {
    const m = cb.get(gram);
    if (m !== undefined) {
      dot += n * m;
    }
  }
  if (dot === 0) {
    return 0.0;
  }
  let na2 = 0;
  for (const n of ca.values()) {
    na2 += n * n;
  }
  let nb2 = 0;
  for (const n of cb.values()) {
    nb2 += n * n;
  }
  const score = dot / Math.sqrt(na2 * nb2);
  return score >= 1.0 ? JUST_BELOW_ONE : score;
}

/** Byte-for-byte phrase lookup of an already-normalized utterance. */
export function matchExact(
  utterance: string,
  table: readonly TableEntry[] = DEFAULT_TABLE,
): CommandKind | null {
  for (const [command, phrase] of table) {
    if (phrase === utterance) {
      return command;
    }
  }
  return null;
}

/** Pick the most similar canonical phrase, requiring score >= threshold.
 *
 * Ties break toward the earliest table entry. A score of exactly 1.0 is
 * reported as an exact match.
 */
export function matchFuzzy(
  utterance: string,
  table: readonly TableEntry[] = DEFAULT_TABLE,
  threshold: number = DEFAULT_FUZZY_THRESHOLD,
): MatchResult {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw new RangeError(`threshold must be in [0, 1], got ${threshold}`);
  }
  let bestCommand: CommandKind | null = null;
  let best = -1.0;
  for (const [command, phrase] of table) {
    const s = similarity(utterance, phrase);
    if (s > best) {
      best = s;
      bestCommand = command;
    }
  }
  best = Math.max(best, 0.0);
  if (best >= threshold) {
    const method: MatchMethod = best === 1.0 ? "Exact" : "Fuzzy";
    return { command: bestCommand, score: best, method };
  }
  return { command: null, score: best, method: "NoMatch" };
}

/** What the operator sees before sending: normalize, then fuzzy-match. */
export function preview(
  rawText: string,
  table: readonly TableEntry[] = DEFAULT_TABLE,
  threshold: number = DEFAULT_FUZZY_THRESHOLD,
): MatchResult {
  return matchFuzzy(normalize(rawText), table, threshold);
}
