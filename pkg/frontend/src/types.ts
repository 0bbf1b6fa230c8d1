// Transport types mirroring the analysis service's JSON contract.

export interface FeatureValues {
  loc: number;
  has_method: boolean;
  has_main: boolean;
  has_class: boolean;
  parsable: boolean;
  compilable: boolean;
  native_import: number;
  external_import: number;
  exception_handling: number;
}

export type FeatureName = keyof FeatureValues;

export const FEATURE_ORDER: FeatureName[] = [
  "loc",
  "has_method",
  "has_main",
  "has_class",
  "parsable",
  "compilable",
  "native_import",
  "external_import",
  "exception_handling",
];

export interface ShapleyPayload {
  phi: Record<string, number>;
  base_value: number;
  prediction: number;
  instance: Record<string, number>;
}

export interface HintPayload {
  challenge_id: string;
  message: string;
  triggering_feature: string;
  advisory: boolean;
}

export interface AnalysisResponse {
  features: FeatureValues;
  probability_reproducible: number;
  predicted: "reproducible" | "irreproducible";
  shapley: ShapleyPayload;
  hints: HintPayload[];
  compiler_status: string;
  degraded: boolean;
  notes: string[];
  diagnostics: { line: number | null; message: string }[];
}

export interface ServiceError {
  code: string;
  message: string;
}
