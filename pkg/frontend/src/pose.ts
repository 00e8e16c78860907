/** Stick-figure rendering of pose documents (COCO-18) as SVG. */

export type KeypointTriple = [number, number, number];

export interface PoseDocument {
  persons: { keypoints: KeypointTriple[] }[];
  capture_size: [number, number];
}

/** Bone list over the 18 COCO joints; indices match the server's renderer. */
export const BONES: [number, number][] = [
  [1, 2], [1, 5],
  [2, 3], [3, 4],
  [5, 6], [6, 7],
  [1, 8], [8, 9], [9, 10],
  [1, 11], [11, 12], [12, 13],
  [1, 0],
  [0, 14], [14, 16],
  [0, 15], [15, 17],
];

export const PERSON_COLORS = ["#e63c3c", "#3c8ce6", "#3cbe5a", "#ebaa28", "#aa50dc", "#32c8c8"];

export interface Segment {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  color: string;
}

export function poseSegments(doc: PoseDocument, width: number, height: number): Segment[] {
  const segments: Segment[] = [];
  doc.persons.forEach((person, personIndex) => {
    const color = PERSON_COLORS[personIndex % PERSON_COLORS.length];
    for (const [a, b] of BONES) {
      const ka = person.keypoints[a];
      const kb = person.keypoints[b];
      if (!ka || !kb || ka[2] <= 0 || kb[2] <= 0) continue;
      segments.push({
        x1: ka[0] * width,
        y1: ka[1] * height,
        x2: kb[0] * width,
        y2: kb[1] * height,
        color,
      });
    }
  });
  return segments;
}

export function poseThumbnailSvg(doc: PoseDocument, width = 160, height = 160): string {
  const strokeWidth = Math.max(1, Math.floor(Math.min(width, height) / 64));
  const lines = poseSegments(doc, width, height)
    .map(
      (s) =>
        `<line x1="${s.x1.toFixed(1)}" y1="${s.y1.toFixed(1)}" ` +
        `x2="${s.x2.toFixed(1)}" y2="${s.y2.toFixed(1)}" ` +
        `stroke="${s.color}" stroke-width="${strokeWidth}" stroke-linecap="round"/>`,
    )
    .join("");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">${lines}</svg>`
  );
}
