/** Canonical OCR document structure accepted by the scoring engine. */
export interface OcrWord {
  text: string;
  bbox: [number, number, number, number];
}

export interface OcrSegment {
  words: OcrWord[];
}

export interface OcrPage {
  page_num: number;
  width: number;
  height: number;
  segments: OcrSegment[];
}

export interface OcrDocument {
  doc_id: string;
  coords: "pixels" | "normalized";
  pages: OcrPage[];
}

/** Engine configuration; every field maps onto one CLI flag. */
export interface ScoreConfig {
  alpha?: number;
  numWeight?: number;
  strWeight?: number;
  anlsThreshold?: number;
  matchThreshold?: number;
  backend?: "reading_order" | "beta_skeleton";
  windowSlack?: number;
}

/** One scored sample, mirroring the engine's per-sample report row. */
export interface ScoreRecord {
  qid: string;
  gt_variant: string;
  m: number;
  g: number;
  d: number;
  s: number;
  anls: number;
  answer_type: string | null;
  hallucinated: boolean;
  missing: boolean;
  empty_prediction: boolean;
}

export interface Aggregates {
  count: number;
  s: number;
  m: number;
  g: number;
  anls: number;
  hallucinated: number;
  missing: number;
}

export interface DatasetResult {
  records: ScoreRecord[];
  aggregates: Aggregates;
  /** Raw serialized report exactly as the engine wrote it. */
  reportText: string;
}
