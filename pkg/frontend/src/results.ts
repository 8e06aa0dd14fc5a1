import { SuggestResponse, Suggestion } from "./api.js";

export interface ResultsCallbacks {
  onAddTrope: (suggestion: Suggestion) => void;
  onExploreTrope: (tropeId: string) => void;
}

/** Ranked suggestion list with recap header, evidence and add buttons. */
export class ResultsPane {
  private root: HTMLElement;
  private callbacks: ResultsCallbacks;

  constructor(root: HTMLElement, callbacks: ResultsCallbacks) {
    this.root = root;
    this.callbacks = callbacks;
    this.root.classList.add("results");
  }

  clear(message = ""): void {
    this.root.textContent = "";
    if (message) {
      const note = document.createElement("p");
      note.className = "results-note";
      note.textContent = message;
      this.root.appendChild(note);
    }
  }

  showError(message: string): void {
    this.clear();
    const note = document.createElement("p");
    note.className = "results-error";
    note.textContent = message;
    this.root.appendChild(note);
  }

  render(response: SuggestResponse, inputNames: Map<string, string>): void {
    this.root.textContent = "";
    this.root.appendChild(this.renderRecap(response, inputNames));

    const list = document.createElement("ol");
    list.className = "suggestion-list";
    for (const suggestion of response.suggestions) {
      list.appendChild(this.renderRow(suggestion));
    }
    this.root.appendChild(list);

    const footer = document.createElement("p");
    footer.className = "results-footer";
    footer.textContent =
      `seed ${response.query.seed} · ${response.query.candidate_count} candidates`;
    this.root.appendChild(footer);
  }

  private renderRecap(
    response: SuggestResponse,
    inputNames: Map<string, string>,
  ): HTMLElement {
    const recap = document.createElement("div");
    recap.className = "results-recap";
    const parts: string[] = [];
    for (const id of response.query.input_tropes) {
      parts.push(inputNames.get(id) ?? id);
    }
    if (response.query.text) parts.push(`“${response.query.text}”`);
    recap.textContent = parts.length
      ? `Suggestions for: ${parts.join(", ")}`
      : "Suggestions";
    return recap;
  }

  private renderRow(suggestion: Suggestion): HTMLElement {
    const row = document.createElement("li");
    row.className = "suggestion";
    row.dataset.trope = suggestion.trope;

    const add = document.createElement("button");
    add.className = "suggestion-add";
    add.textContent = "+";
    add.title = "Add to board";
    add.addEventListener("click", () => this.callbacks.onAddTrope(suggestion));
    row.appendChild(add);

    const name = document.createElement("a");
    name.className = "suggestion-name";
    name.textContent = suggestion.name;
    name.href = "#";
    name.addEventListener("click", (e) => {
      e.preventDefault();
      this.callbacks.onExploreTrope(suggestion.trope);
    });
    row.appendChild(name);

    if (suggestion.laconic) {
      const info = document.createElement("span");
      info.className = "suggestion-info";
      info.textContent = "ⓘ";
      info.title = suggestion.laconic;
      row.appendChild(info);
    }

    // scores come straight from the API payload
    const score = document.createElement("span");
    score.className = "suggestion-score";
    score.textContent = suggestion.final_score.toFixed(4);
    row.appendChild(score);

    if (suggestion.evidence.length > 0) {
      row.appendChild(this.renderEvidence(suggestion));
    }
    return row;
  }

  private renderEvidence(suggestion: Suggestion): HTMLElement {
    const holder = document.createElement("div");
    holder.className = "evidence";
    const list = document.createElement("ul");
    list.className = "evidence-list";
    for (const item of suggestion.evidence) {
      const entry = document.createElement("li");
      entry.dataset.movie = item.movie;
      const title = document.createElement("strong");
      title.textContent = item.title;
      entry.appendChild(title);
      const text = document.createElement("span");
      text.textContent = `: ${item.text}`;
      entry.appendChild(text);
      list.appendChild(entry);
    }
    holder.appendChild(list);
    return holder;
  }
}
