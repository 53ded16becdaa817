export { nls, scoreDataset, scoreSample, EngineError } from "./engine.js";
export type { SampleInput } from "./engine.js";
export type {
  Aggregates,
  DatasetResult,
  OcrDocument,
  OcrPage,
  OcrSegment,
  OcrWord,
  ScoreConfig,
  ScoreRecord,
} from "./types.js";
