// Generated by scripts/record_payloads.py from the bundled run; do not edit.

export interface FixtureDecision {
  supply: number[];
  demand: number[];
  point: number[];
}

export const FIXTURE_DECISIONS: FixtureDecision[] = [
  { supply: [10, 25], demand: [5, 15, 15], point: [5, 15] },
  { supply: [13, 52], demand: [26, 19, 20], point: [6, 20] },
  { supply: [71, 79], demand: [17, 87, 46], point: [16, 46] },
  { supply: [2, 29], demand: [12, 13, 6], point: [11, 6] },
  { supply: [5, 4], demand: [2, 5, 2], point: [0, 2] },
  { supply: [65, 70], demand: [56, 43, 36], point: [0, 36] },
  { supply: [107, 23], demand: [55, 19, 56], point: [0, 23] },
  { supply: [96, 6], demand: [24, 5, 73], point: [0, 6] },
  { supply: [32, 54], demand: [27, 54, 5], point: [22, 5] },
  { supply: [31, 79], demand: [32, 47, 31], point: [16, 31] },
  { supply: [92, 4], demand: [25, 41, 30], point: [0, 4] },
  { supply: [44, 50], demand: [47, 45, 2], point: [1, 2] },
  { supply: [24, 74], demand: [9, 36, 53], point: [12, 53] },
  { supply: [64, 81], demand: [83, 56, 6], point: [0, 6] },
  { supply: [97, 22], demand: [35, 54, 30], point: [0, 22] },
  { supply: [14, 6], demand: [9, 8, 3], point: [0, 3] },
  { supply: [90, 4], demand: [12, 51, 31], point: [0, 4] },
  { supply: [27, 56], demand: [45, 13, 25], point: [0, 25] },
  { supply: [78, 66], demand: [52, 48, 44], point: [0, 44] },
  { supply: [75, 99], demand: [65, 52, 57], point: [0, 57] },
  { supply: [12, 1], demand: [6, 4, 3], point: [0, 1] },
  { supply: [31, 69], demand: [24, 44, 32], point: [13, 32] },
  { supply: [64, 39], demand: [38, 34, 31], point: [0, 31] },
  { supply: [83, 36], demand: [28, 51, 40], point: [0, 36] },
  { supply: [15, 12], demand: [16, 1, 10], point: [0, 10] },
];

export const POLYGON_SITUATION = {
  supply: [5, 3],
  demand: [4, 2, 2],
};
