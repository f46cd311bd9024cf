/** Shared request/response shapes for the parsing service. */

/** Everything the left-hand configuration panel holds. Field names
 * mirror the /api/parse request body one-to-one. */
export interface UiConfigState {
  sentence: string;
  beam_width: number;
  use_temperature: boolean;
  branching: string;
  embedding_variant: string;
}

/** JSON body sent to POST /api/parse. */
export interface ParseRequest {
  sentence: string;
  beam_width: number;
  use_temperature: boolean;
  branching: string;
  embedding_variant: string;
}

/** Tree node as returned by the service: leaves carry a token,
 * internal nodes a label, probability, and exactly two children. */
export type ParseTreeJson = LeafJson | InternalJson;

export interface LeafJson {
  token: string;
  span: [number, number];
}

export interface InternalJson {
  label: string;
  span: [number, number];
  prob: number;
  children: ParseTreeJson[];
}

export interface ParseResponse {
  tree: ParseTreeJson;
  cum_logprob: number;
  model_version: string;
  timing_ms: number;
}

export interface ModelInfo {
  variant_id: string;
  branching: string;
  embedding_mode: string;
  embedding_variant: string;
  dim: number;
  temperature_fitted: boolean;
}

export interface HealthResponse {
  status: string;
  models: string[];
}

export function isLeaf(node: ParseTreeJson): node is LeafJson {
  return "token" in node;
}

export const DEFAULT_CONFIG: UiConfigState = {
  sentence: "",
  beam_width: 1,
  use_temperature: false,
  branching: "left",
  embedding_variant: "random",
};
