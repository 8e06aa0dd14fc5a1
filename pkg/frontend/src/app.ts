import { ApiClient, SearchHit, SuggestResponse } from "./api.js";
import { BoardPane } from "./board.js";
import { ControlsPane } from "./controls.js";
import { ExplorePane } from "./explore.js";
import { Persistence } from "./persist.js";
import { ResultsPane } from "./results.js";
import { TropeCombobox } from "./search.js";
import { BoardState } from "./state.js";

export interface AppOptions {
  canvasId?: string;
  writer?: string;
  saveDebounceMs?: number;
  searchDebounceMs?: number;
}

/**
 * Wires the board, query controls, results and explore panes together.
 * Results and explore share the right pane and are mutually exclusive;
 * switching back restores the previous results untouched.
 */
export class App {
  readonly api: ApiClient;
  state: BoardState;
  board: BoardPane;
  controls: ControlsPane;
  results: ResultsPane;
  explore: ExplorePane;
  persistence: Persistence;
  combobox: TropeCombobox;

  private resultsEl: HTMLElement;
  private exploreEl: HTMLElement;
  private tropeNames = new Map<string, string>();

  constructor(root: HTMLElement, api: ApiClient, options: AppOptions = {}) {
    this.api = api;
    this.state = new BoardState(
      options.canvasId ?? "default",
      options.writer ?? `web-${Math.random().toString(36).slice(2, 10)}`,
    );

    root.textContent = "";
    const banner = el(root, "div", "banner-slot");
    const layout = el(root, "div", "layout");
    const sidebar = el(layout, "div", "sidebar");
    const boardEl = el(layout, "div", "board-slot");
    const rightPane = el(layout, "div", "right-pane");
    const controlsEl = el(rightPane, "div", "controls-slot");
    const comboboxEl = el(rightPane, "div", "combobox-slot");
    this.resultsEl = el(rightPane, "div", "results-slot");
    this.exploreEl = el(rightPane, "div", "explore-slot");
    this.exploreEl.hidden = true;

    this.persistence = new Persistence(api, banner, options.saveDebounceMs);

    this.board = new BoardPane(boardEl, this.state, {
      onChange: () => this.onBoardChange(),
      onExploreMovie: (movieId) => void this.openMovie(movieId),
      onExploreTrope: (tropeId) => void this.openTrope(tropeId),
    });

    this.controls = new ControlsPane(controlsEl, this.state, api, {
      onResults: (response) => this.showResults(response),
      onError: (message) => {
        this.showResultsPane();
        this.results.showError(message);
      },
    });

    this.results = new ResultsPane(this.resultsEl, {
      onAddTrope: (suggestion) => this.addTropeCard(suggestion.trope, suggestion.name),
      onExploreTrope: (tropeId) => void this.openTrope(tropeId),
    });

    this.explore = new ExplorePane(this.exploreEl, api, {
      onBack: () => this.showResultsPane(),
      onAddTrope: (tropeId, name) => this.addTropeCard(tropeId, name),
    });

    this.combobox = new TropeCombobox(
      comboboxEl,
      api,
      { onPick: (hit) => this.addInputFromSearch(hit) },
      options.searchDebounceMs,
    );

    this.buildSidebar(sidebar);
    this.board.render();
    this.controls.refreshInputs(this.tropeNames);
  }

  /** Replace the board with the server copy, if one exists. */
  async load(): Promise<void> {
    const doc = await this.api.loadCanvas(this.state.canvasId);
    if (doc === null) return;
    const writer = this.state.writer;
    this.state = BoardState.fromDocument(doc, writer);
    await this.learnCardNames();
    this.board.setState(this.state);
    this.controls.setState(this.state);
    this.controls.refreshInputs(this.tropeNames);
  }

  private buildSidebar(sidebar: HTMLElement): void {
    const buttons: Array<[string, () => void]> = [
      ["Add text", () => this.promptCard("text", "Text card contents")],
      ["Add title", () => this.promptCard("title", "Working title")],
      ["Add image", () => this.promptCard("image", "Image URL")],
      ["Add movie", () => this.promptCard("movie", "Movie id")],
    ];
    for (const [label, onClick] of buttons) {
      const button = document.createElement("button");
      button.className = "sidebar-button";
      button.textContent = label;
      button.addEventListener("click", onClick);
      sidebar.appendChild(button);
    }
  }

  private promptCard(cardType: "text" | "title" | "image" | "movie", message: string): void {
    const payload = window.prompt(message);
    if (payload) this.board.addCard(cardType, payload);
  }

  addTropeCard(tropeId: string, name: string): void {
    this.tropeNames.set(tropeId, name);
    this.board.learnName(tropeId, name);
    this.board.addCard("trope", tropeId);
  }

  private addInputFromSearch(hit: SearchHit): void {
    this.tropeNames.set(hit.id, hit.name);
    this.board.learnName(hit.id, hit.name);
    const card = this.board.addCard("trope", hit.id);
    this.state.toggleSelected(card.cardId);
    this.board.render();
    this.onBoardChange();
  }

  private onBoardChange(): void {
    this.controls.refreshInputs(this.tropeNames);
    this.persistence.schedule(this.state);
  }

  private showResults(response: SuggestResponse): void {
    for (const suggestion of response.suggestions) {
      this.tropeNames.set(suggestion.trope, suggestion.name);
      this.board.learnName(suggestion.trope, suggestion.name);
    }
    this.showResultsPane();
    this.results.render(response, this.tropeNames);
  }

  private showResultsPane(): void {
    this.exploreEl.hidden = true;
    this.resultsEl.hidden = false;
  }

  private showExplorePane(): void {
    this.resultsEl.hidden = true;
    this.exploreEl.hidden = false;
  }

  async openTrope(tropeId: string, indexFilter = ""): Promise<void> {
    this.showExplorePane();
    await this.explore.showTrope(tropeId, indexFilter);
  }

  async openMovie(movieId: string, indexFilter = ""): Promise<void> {
    this.showExplorePane();
    await this.explore.showMovie(movieId, indexFilter);
  }

  /** Resolve display names for trope cards loaded from a saved canvas. */
  private async learnCardNames(): Promise<void> {
    const pending = new Set<string>();
    for (const card of this.state.cards) {
      if (card.cardType === "trope" && !this.tropeNames.has(card.payload)) {
        pending.add(card.payload);
      }
    }
    await Promise.all(
      [...pending].map(async (tropeId) => {
        try {
          const detail = await this.api.trope(tropeId);
          this.tropeNames.set(tropeId, detail.name);
          this.board.learnName(tropeId, detail.name);
        } catch {
          // keep showing the raw id for unknown tropes
        }
      }),
    );
  }

}

function el(parent: HTMLElement, tag: string, className: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  parent.appendChild(node);
  return node;
}
