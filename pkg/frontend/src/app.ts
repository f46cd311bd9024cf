/** DOM wiring: left panel holds the sentence input and configuration,
 * right panel renders the collapsible causality tree. All parsing
 * happens server-side; this file is a view over ParseResponse. */

import { ApiClient, ApiError } from "./api.js";
import { canPredict, normalizeSelections, toParseRequest } from "./state.js";
import {
  TreeViewNode,
  fromParseTree,
  isLeafNode,
  toggleNode,
} from "./tree.js";
import { DEFAULT_CONFIG, ModelInfo, UiConfigState } from "./types.js";

interface AppState {
  config: UiConfigState;
  models: ModelInfo[];
  tree: TreeViewNode | null;
  cumLogprob: number | null;
  modelVersion: string | null;
  timingMs: number | null;
  pending: boolean;
  error: string | null;
}

export function mountApp(
  root: HTMLElement,
  client: ApiClient = new ApiClient(apiBaseUrl()),
): void {
  const state: AppState = {
    config: { ...DEFAULT_CONFIG },
    models: [],
    tree: null,
    cumLogprob: null,
    modelVersion: null,
    timingMs: null,
    pending: false,
    error: null,
  };

  root.innerHTML = `
    <div class="panel panel-left">
      <h2>Sentence</h2>
      <textarea id="sentence" rows="4"
        placeholder="If the system detects an error, a warning window shall be shown."></textarea>
      <h2>Configuration</h2>
      <label>Beam width
        <input id="beam" type="number" min="1" step="1" value="1">
      </label>
      <label>
        <input id="temperature" type="checkbox"> Temperature scaling
      </label>
      <label>Branching
        <select id="branching"></select>
      </label>
      <label>Word embeddings
        <select id="variant"></select>
      </label>
      <button id="predict" disabled>Predict</button>
      <div id="error" class="error" hidden></div>
    </div>
    <div class="panel panel-right">
      <h2>Parsing result</h2>
      <div id="meta" class="meta"></div>
      <div id="tree" class="tree"></div>
    </div>`;

  const el = {
    sentence: root.querySelector<HTMLTextAreaElement>("#sentence")!,
    beam: root.querySelector<HTMLInputElement>("#beam")!,
    temperature: root.querySelector<HTMLInputElement>("#temperature")!,
    branching: root.querySelector<HTMLSelectElement>("#branching")!,
    variant: root.querySelector<HTMLSelectElement>("#variant")!,
    predict: root.querySelector<HTMLButtonElement>("#predict")!,
    error: root.querySelector<HTMLDivElement>("#error")!,
    meta: root.querySelector<HTMLDivElement>("#meta")!,
    tree: root.querySelector<HTMLDivElement>("#tree")!,
  };

  function readConfig(): void {
    state.config = {
      sentence: el.sentence.value,
      beam_width: Math.max(1, Math.floor(Number(el.beam.value) || 1)),
      use_temperature: el.temperature.checked,
      branching: el.branching.value || state.config.branching,
      embedding_variant: el.variant.value || state.config.embedding_variant,
    };
    render();
  }

  function render(): void {
    el.predict.disabled = !canPredict(state.config, state.pending);
    el.predict.textContent = state.pending ? "Predicting..." : "Predict";
    el.error.hidden = state.error === null;
    el.error.textContent = state.error ?? "";
    el.meta.textContent =
      state.tree === null
        ? ""
        : `model ${state.modelVersion}, ` +
          `cum_logprob ${state.cumLogprob!.toFixed(4)}, ` +
          `${state.timingMs!.toFixed(1)} ms`;
    el.tree.replaceChildren(
      state.tree === null
        ? document.createTextNode("No parse yet.")
        : renderTree(state.tree),
    );
  }

  function renderTree(node: TreeViewNode): HTMLElement {
    const item = document.createElement("div");
    item.className = isLeafNode(node) ? "node leaf" : "node internal";
    const head = document.createElement("span");
    head.className = "head";
    head.textContent = isLeafNode(node)
      ? node.label
      : `${node.collapsed ? "▸" : "▾"} ${node.label}`;
    head.title =
      `span [${node.span[0]}, ${node.span[1]})` +
      (node.prob === null ? "" : `, ${(node.prob * 100).toFixed(1)}%`);
    if (!isLeafNode(node)) {
      head.addEventListener("click", () => {
        state.tree = toggleNode(state.tree!, node.path);
        render();
      });
    }
    item.appendChild(head);
    if (!node.collapsed) {
      for (const child of node.children) {
        item.appendChild(renderTree(child));
      }
    }
    return item;
  }

  async function predict(): Promise<void> {
    if (!canPredict(state.config, state.pending)) return;
    state.pending = true;
    state.error = null;
    render();
    try {
      const response = await client.parse(toParseRequest(state.config));
      state.tree = fromParseTree(response.tree);
      state.cumLogprob = response.cum_logprob;
      state.modelVersion = response.model_version;
      state.timingMs = response.timing_ms;
    } catch (err) {
      // keep the previous tree; surface the failure in the banner
      state.error =
        err instanceof ApiError
          ? `Server error (${err.status}): ${err.message}`
          : `Request failed: ${String(err)}. Is the service running?`;
    } finally {
      state.pending = false;
      render();
    }
  }

  el.sentence.addEventListener("input", readConfig);
  el.beam.addEventListener("input", readConfig);
  el.temperature.addEventListener("change", readConfig);
  el.branching.addEventListener("change", readConfig);
  el.variant.addEventListener("change", readConfig);
  el.predict.addEventListener("click", () => void predict());

  void client
    .models()
    .then((models) => {
      state.models = models;
      fillSelect(el.branching, [...new Set(models.map((m) => m.branching))]);
      fillSelect(el.variant, [
        ...new Set(models.map((m) => m.embedding_variant)),
      ]);
      state.config = normalizeSelections(state.config, models);
      el.branching.value = state.config.branching;
      el.variant.value = state.config.embedding_variant;
      render();
    })
    .catch((err) => {
      state.error = `Could not load model list: ${String(err)}`;
      render();
    });

  render();
}

function fillSelect(select: HTMLSelectElement, values: string[]): void {
  select.replaceChildren(
    ...values.map((value) => {
      const option = document.createElement("option");
      option.value = value;
      option.textContent = value;
      return option;
    }),
  );
}

function apiBaseUrl(): string {
  const meta = document.querySelector<HTMLMetaElement>(
    'meta[name="api-base-url"]',
  );
  return meta?.content ?? "";
}

const mount = document.getElementById("app");
if (mount !== null) {
  mountApp(mount);
}
