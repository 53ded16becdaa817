import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync, readFileSync, mkdirSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import type {
  Aggregates,
  DatasetResult,
  OcrDocument,
  ScoreConfig,
  ScoreRecord,
} from "./types.js";

const ENGINE = process.env.SMUDGE_ENGINE ?? "smudge";

export class EngineError extends Error {
  constructor(message: string, public readonly exitCode: number | null) {
    super(message);
    this.name = "EngineError";
  }
}

function runEngine(args: string[]): string {
  const result = spawnSync(ENGINE, args, { encoding: "utf-8" });
  if (result.error) {
    throw new EngineError(
      `failed to launch scoring engine '${ENGINE}': ${result.error.message}`,
      null,
    );
  }
  if (result.status !== 0) {
    throw new EngineError(
      `engine exited with code ${result.status}: ${result.stderr.trim()}`,
      result.status,
    );
  }
  return result.stdout;
}

function configFlags(config: ScoreConfig = {}): string[] {
  const flags: string[] = [];
  if (config.alpha !== undefined) flags.push("--alpha", String(config.alpha));
  if (config.numWeight !== undefined) flags.push("--num-weight", String(config.numWeight));
  if (config.strWeight !== undefined) flags.push("--str-weight", String(config.strWeight));
  if (config.anlsThreshold !== undefined)
    flags.push("--anls-threshold", String(config.anlsThreshold));
  if (config.matchThreshold !== undefined)
    flags.push("--match-threshold", String(config.matchThreshold));
  if (config.backend !== undefined) flags.push("--backend", config.backend);
  if (config.windowSlack !== undefined)
    flags.push("--window-slack", String(config.windowSlack));
  return flags;
}

/** Normalized Levenshtein similarity, delegated to the engine. */
export function nls(a: string, b: string): number {
  return Number(runEngine(["nls", a, b]).trim());
}

/** Score a full dataset from files already in the canonical formats. */
export function scoreDataset(
  gtPath: string,
  predPath: string,
  ocrDir: string,
  config: ScoreConfig = {},
): DatasetResult {
  const workDir = mkdtempSync(join(tmpdir(), "smudge-"));
  try {
    const reportPath = join(workDir, "report.json");
    runEngine([
      "score",
      "--gt", gtPath,
      "--predictions", predPath,
      "--ocr-dir", ocrDir,
      "--output", reportPath,
      ...configFlags(config),
    ]);
    const reportText = readFileSync(reportPath, "utf-8");
    const report = JSON.parse(reportText) as {
      samples: ScoreRecord[];
      aggregates: Aggregates;
    };
    return { records: report.samples, aggregates: report.aggregates, reportText };
  } finally {
    rmSync(workDir, { recursive: true, force: true });
  }
}

export interface SampleInput {
  question: string;
  gtAnswers: string[];
  prediction: string;
  /** Canonical OCR structure, or a path to a canonical OCR file. */
  ocrDocument: OcrDocument | string;
  config?: ScoreConfig;
  confidence?: number;
}

/** Score one sample by staging a single-sample dataset through the engine. */
export function scoreSample(input: SampleInput): ScoreRecord {
  if (input.gtAnswers.length === 0) {
    throw new Error("gtAnswers: at least one ground-truth variant is required");
  }
  const workDir = mkdtempSync(join(tmpdir(), "smudge-"));
  try {
    const ocrDir = join(workDir, "ocr");
    mkdirSync(ocrDir);
    let docId: string;
    if (typeof input.ocrDocument === "string") {
      const parsed = JSON.parse(readFileSync(input.ocrDocument, "utf-8")) as OcrDocument;
      docId = parsed.doc_id;
      writeFileSync(join(ocrDir, "doc.json"), JSON.stringify(parsed));
    } else {
      docId = input.ocrDocument.doc_id;
      writeFileSync(join(ocrDir, "doc.json"), JSON.stringify(input.ocrDocument));
    }
    const gtPath = join(workDir, "gt.json");
    writeFileSync(gtPath, JSON.stringify({
      dataset: "bindings",
      samples: [{
        qid: "sample",
        doc_id: docId,
        question: input.question,
        answers: input.gtAnswers,
      }],
    }));
    const predPath = join(workDir, "preds.json");
    writeFileSync(predPath, JSON.stringify({
      model: "bindings",
      predictions: [{
        qid: "sample",
        answer: input.prediction,
        ...(input.confidence !== undefined ? { confidence: input.confidence } : {}),
      }],
    }));
    const result = scoreDataset(gtPath, predPath, ocrDir, input.config);
    return result.records[0];
  } finally {
    rmSync(workDir, { recursive: true, force: true });
  }
}
