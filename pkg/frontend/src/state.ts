/** Pure state helpers: config-to-request mapping and Predict gating. */

import { ModelInfo, ParseRequest, UiConfigState } from "./types.js";

/** Field-for-field mapping onto the /api/parse body. Intentionally
 * explicit so a renamed field breaks the contract test, not the
 * wire format. */
export function toParseRequest(state: UiConfigState): ParseRequest {
  return {
    sentence: state.sentence,
    beam_width: state.beam_width,
    use_temperature: state.use_temperature,
    branching: state.branching,
    embedding_variant: state.embedding_variant,
  };
}

/** Predict is enabled only for a non-blank sentence, a valid beam
 * width, and no request already in flight. */
export function canPredict(state: UiConfigState, pending: boolean): boolean {
  return !pending && state.sentence.trim().length > 0 && state.beam_width >= 1;
}

/** Distinct (branching, embedding_variant) choices offered by the
 * server, for populating the selection dropdowns. */
export function availableChoices(models: ModelInfo[]): {
  branchings: string[];
  variants: string[];
} {
  const branchings = [...new Set(models.map((m) => m.branching))];
  const variants = [...new Set(models.map((m) => m.embedding_variant))];
  return { branchings, variants };
}

/** Clamp a selection to what the server actually offers. */
export function normalizeSelections(
  state: UiConfigState,
  models: ModelInfo[],
): UiConfigState {
  if (models.length === 0) return state;
  const { branchings, variants } = availableChoices(models);
  return {
    ...state,
    branching: branchings.includes(state.branching)
      ? state.branching
      : branchings[0],
    embedding_variant: variants.includes(state.embedding_variant)
      ? state.embedding_variant
      : variants[0],
  };
}
