import { ApiClient, ApiError, SuggestResponse } from "./api.js";
import { BoardState } from "./state.js";

export interface ControlsCallbacks {
  onResults: (response: SuggestResponse) => void;
  onError: (message: string) => void;
}

const BREADTH_LABELS: Record<number, string> = {
  1: "closely related",
  2: "mixed",
  3: "exploratory",
};

/**
 * Query panel: recap list of selected inputs, free-text box, breadth
 * slider, filters, count and seed controls, and the Suggest button.
 * At most one suggest request is in flight; stale responses are dropped.
 */
export class ControlsPane {
  private state: BoardState;
  private api: ApiClient;
  private callbacks: ControlsCallbacks;
  private queryToken = 0;

  readonly inputList: HTMLUListElement;
  readonly textBox: HTMLInputElement;
  readonly slider: HTMLInputElement;
  readonly sliderLabel: HTMLSpanElement;
  readonly countBox: HTMLInputElement;
  readonly temperatureBox: HTMLInputElement;
  readonly indexFilterBox: HTMLInputElement;
  readonly movieFilterBox: HTMLInputElement;
  readonly seedValue: HTMLSpanElement;
  readonly pinBox: HTMLInputElement;
  readonly suggestButton: HTMLButtonElement;

  constructor(
    root: HTMLElement,
    state: BoardState,
    api: ApiClient,
    callbacks: ControlsCallbacks,
  ) {
    this.state = state;
    this.api = api;
    this.callbacks = callbacks;
    root.classList.add("controls");

    root.appendChild(labelled("Inputs", (this.inputList = document.createElement("ul"))));
    this.inputList.className = "input-list";

    this.textBox = document.createElement("input");
    this.textBox.className = "control-text";
    this.textBox.placeholder = "describe a scene or idea";
    this.textBox.addEventListener("input", () => {
      this.state.queryText = this.textBox.value;
    });
    root.appendChild(labelled("Text", this.textBox));

    this.slider = document.createElement("input");
    this.slider.type = "range";
    this.slider.min = "1";
    this.slider.max = "3";
    this.slider.step = "1";
    this.slider.className = "control-breadth";
    this.sliderLabel = document.createElement("span");
    this.sliderLabel.className = "control-breadth-label";
    this.slider.addEventListener("input", () => {
      this.state.controls.breadth = Number(this.slider.value) as 1 | 2 | 3;
      this.sliderLabel.textContent = BREADTH_LABELS[this.state.controls.breadth];
    });
    const breadthRow = labelled("Breadth", this.slider);
    breadthRow.appendChild(this.sliderLabel);
    root.appendChild(breadthRow);

    this.countBox = document.createElement("input");
    this.countBox.type = "number";
    this.countBox.min = "1";
    this.countBox.className = "control-count";
    this.countBox.addEventListener("input", () => {
      const count = parseInt(this.countBox.value, 10);
      if (count >= 1) this.state.controls.count = count;
    });
    root.appendChild(labelled("Count", this.countBox));

    this.temperatureBox = document.createElement("input");
    this.temperatureBox.type = "number";
    this.temperatureBox.min = "0";
    this.temperatureBox.step = "0.01";
    this.temperatureBox.className = "control-temperature";
    this.temperatureBox.addEventListener("input", () => {
      const theta = parseFloat(this.temperatureBox.value);
      if (theta >= 0) this.state.controls.temperature = theta;
    });
    root.appendChild(labelled("Temperature", this.temperatureBox));

    this.indexFilterBox = document.createElement("input");
    this.indexFilterBox.className = "control-index-filters";
    this.indexFilterBox.placeholder = "comma separated";
    this.indexFilterBox.addEventListener("input", () => {
      this.state.controls.indexFilters = splitList(this.indexFilterBox.value);
    });
    root.appendChild(labelled("Index filters", this.indexFilterBox));

    this.movieFilterBox = document.createElement("input");
    this.movieFilterBox.className = "control-movie-filters";
    this.movieFilterBox.placeholder = "comma separated";
    this.movieFilterBox.addEventListener("input", () => {
      this.state.controls.movieFilters = splitList(this.movieFilterBox.value);
    });
    root.appendChild(labelled("Movie filters", this.movieFilterBox));

    this.seedValue = document.createElement("span");
    this.seedValue.className = "control-seed";
    this.seedValue.textContent = "–";
    this.pinBox = document.createElement("input");
    this.pinBox.type = "checkbox";
    this.pinBox.className = "control-pin";
    this.pinBox.addEventListener("change", () => {
      this.state.controls.pinSeed = this.pinBox.checked;
    });
    const seedRow = labelled("Seed", this.seedValue);
    const pinLabel = document.createElement("label");
    pinLabel.className = "control-pin-label";
    pinLabel.appendChild(this.pinBox);
    pinLabel.appendChild(document.createTextNode(" pin"));
    seedRow.appendChild(pinLabel);
    root.appendChild(seedRow);

    this.suggestButton = document.createElement("button");
    this.suggestButton.className = "control-suggest";
    this.suggestButton.textContent = "Suggest";
    this.suggestButton.addEventListener("click", () => {
      void this.suggest();
    });
    root.appendChild(this.suggestButton);

    this.syncFromState();
  }

  setState(state: BoardState): void {
    this.state = state;
    this.syncFromState();
  }

  /** Push current control values into the widgets. */
  syncFromState(): void {
    this.textBox.value = this.state.queryText;
    this.slider.value = String(this.state.controls.breadth);
    this.sliderLabel.textContent = BREADTH_LABELS[this.state.controls.breadth];
    this.countBox.value = String(this.state.controls.count);
    this.temperatureBox.value = String(this.state.controls.temperature);
    this.indexFilterBox.value = this.state.controls.indexFilters.join(", ");
    this.movieFilterBox.value = this.state.controls.movieFilters.join(", ");
    this.pinBox.checked = this.state.controls.pinSeed;
    if (this.state.lastSeed !== null) {
      this.seedValue.textContent = String(this.state.lastSeed);
    }
  }

  /** Re-render the recap list of cards currently selected as inputs. */
  refreshInputs(names: Map<string, string>): void {
    this.inputList.textContent = "";
    for (const card of this.state.selectedCards()) {
      const item = document.createElement("li");
      item.dataset.cardId = card.cardId;
      item.textContent =
        card.cardType === "trope"
          ? names.get(card.payload) ?? card.payload
          : `“${card.payload}”`;
      this.inputList.appendChild(item);
    }
  }

  async suggest(): Promise<void> {
    const seed = this.state.nextSeed();
    const body = this.state.buildQuery(seed);
    const token = ++this.queryToken;
    this.suggestButton.disabled = true;
    try {
      const response = await this.api.suggest(body);
      if (token !== this.queryToken) return;
      this.state.recordSeed(response.query.seed);
      this.seedValue.textContent = String(response.query.seed);
      this.callbacks.onResults(response);
    } catch (err) {
      if (token !== this.queryToken) return;
      const message = err instanceof ApiError ? err.message : String(err);
      this.callbacks.onError(message);
    } finally {
      if (token === this.queryToken) this.suggestButton.disabled = false;
    }
  }
}

function labelled(text: string, widget: HTMLElement): HTMLDivElement {
  const row = document.createElement("div");
  row.className = "control-row";
  const label = document.createElement("label");
  label.textContent = text;
  row.appendChild(label);
  row.appendChild(widget);
  return row;
}

function splitList(value: string): string[] {
  return value
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part.length > 0);
}
