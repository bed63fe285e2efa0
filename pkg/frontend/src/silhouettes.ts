/** Body-outline geometry for the paint canvases, in unit coordinates. */

export interface Circle {
  cx: number;
  cy: number;
  r: number;
}

/** Right half of the body polygon, shoulders to crotch, y pointing down. */
const RIGHT_HALF: [number, number][] = [
  [0.545, 0.15], // neck
  [0.685, 0.185], // shoulder
  [0.715, 0.33], // outer elbow
  [0.735, 0.47], // outer wrist
  [0.75, 0.53], // hand tip
  [0.7, 0.545], // hand inner
  [0.685, 0.475], // inner wrist
  [0.655, 0.345], // inner elbow
  [0.635, 0.245], // armpit
  [0.615, 0.42], // waist
  [0.635, 0.52], // hip
  [0.6, 0.72], // outer knee
  [0.585, 0.93], // outer ankle
  [0.6, 0.965], // foot tip
  [0.525, 0.965], // foot inner
  [0.527, 0.89], // inner ankle
  [0.525, 0.7], // inner knee
  [0.5, 0.565], // crotch
];

/** Closed body outline: right half then the mirrored left half. */
export const BODY_OUTLINE: [number, number][] = [
  ...RIGHT_HALF,
  ...RIGHT_HALF.slice()
    .reverse()
    .filter(([x]) => x !== 0.5)
    .map(([x, y]) => [1 - x, y] as [number, number]),
];

export const HEAD: Circle = { cx: 0.5, cy: 0.085, r: 0.062 };
