import { ApiClient, MovieDetail, TropeDetail } from "./api.js";

export interface ExploreCallbacks {
  onBack: () => void;
  onAddTrope: (tropeId: string, name: string) => void;
}

type Target =
  | { kind: "trope"; id: string }
  | { kind: "movie"; id: string };

/**
 * Right-pane explore mode: sub-tropes and occurrences for a trope, or
 * synopsis and trope list for a movie, both narrowable by index filter.
 * The filter is applied by the server; the pane re-fetches instead of
 * filtering locally.
 */
export class ExplorePane {
  private root: HTMLElement;
  private api: ApiClient;
  private callbacks: ExploreCallbacks;
  private target: Target | null = null;
  private indexFilter = "";

  constructor(root: HTMLElement, api: ApiClient, callbacks: ExploreCallbacks) {
    this.root = root;
    this.api = api;
    this.callbacks = callbacks;
    this.root.classList.add("explore");
  }

  async showTrope(id: string, indexFilter = ""): Promise<void> {
    this.target = { kind: "trope", id };
    this.indexFilter = indexFilter;
    const detail = await this.api.trope(id, indexFilter || undefined);
    this.renderTrope(detail);
  }

  async showMovie(id: string, indexFilter = ""): Promise<void> {
    this.target = { kind: "movie", id };
    this.indexFilter = indexFilter;
    const detail = await this.api.movie(id, indexFilter || undefined);
    this.renderMovie(detail);
  }

  private async refilter(indexFilter: string): Promise<void> {
    if (!this.target) return;
    if (this.target.kind === "trope") {
      await this.showTrope(this.target.id, indexFilter);
    } else {
      await this.showMovie(this.target.id, indexFilter);
    }
  }

  private renderShell(heading: string): HTMLElement {
    this.root.textContent = "";

    const bar = document.createElement("div");
    bar.className = "explore-bar";
    const back = document.createElement("button");
    back.className = "explore-back";
    back.textContent = "← Results";
    back.addEventListener("click", () => this.callbacks.onBack());
    bar.appendChild(back);

    const filter = document.createElement("input");
    filter.className = "explore-filter";
    filter.placeholder = "index filter";
    filter.value = this.indexFilter;
    filter.addEventListener("change", () => {
      void this.refilter(filter.value.trim());
    });
    bar.appendChild(filter);
    this.root.appendChild(bar);

    const title = document.createElement("h2");
    title.className = "explore-title";
    title.textContent = heading;
    this.root.appendChild(title);

    const body = document.createElement("div");
    body.className = "explore-body";
    this.root.appendChild(body);
    return body;
  }

  private renderTrope(detail: TropeDetail): void {
    const body = this.renderShell(detail.name);
    if (detail.laconic) {
      const laconic = document.createElement("p");
      laconic.className = "explore-laconic";
      laconic.textContent = detail.laconic;
      body.appendChild(laconic);
    }

    body.appendChild(sectionHeading("Indexes"));
    body.appendChild(plainList("explore-indexes", detail.indexes));

    body.appendChild(sectionHeading("Sub-tropes"));
    const subs = document.createElement("ul");
    subs.className = "explore-subtropes";
    for (const sub of detail.sub_tropes) {
      subs.appendChild(this.tropeItem(sub, sub));
    }
    body.appendChild(subs);

    body.appendChild(sectionHeading("Occurrences"));
    const occurrences = document.createElement("ul");
    occurrences.className = "explore-occurrences";
    for (const occ of detail.occurrences) {
      const item = document.createElement("li");
      item.dataset.movie = occ.movie;
      item.textContent = `${occ.title}: ${occ.text}`;
      occurrences.appendChild(item);
    }
    body.appendChild(occurrences);
  }

  private renderMovie(detail: MovieDetail): void {
    const heading = detail.year ? `${detail.title} (${detail.year})` : detail.title;
    const body = this.renderShell(heading);
    if (detail.synopsis) {
      const synopsis = document.createElement("p");
      synopsis.className = "explore-synopsis";
      synopsis.textContent = detail.synopsis;
      body.appendChild(synopsis);
    }
    if (detail.genres && detail.genres.length) {
      body.appendChild(sectionHeading("Genres"));
      body.appendChild(plainList("explore-genres", detail.genres));
    }

    body.appendChild(sectionHeading("Tropes"));
    const tropes = document.createElement("ul");
    tropes.className = "explore-tropes";
    for (const entry of detail.tropes) {
      const item = this.tropeItem(entry.trope, entry.name);
      const text = document.createElement("span");
      text.className = "explore-occurrence-text";
      text.textContent = `: ${entry.text}`;
      item.appendChild(text);
      tropes.appendChild(item);
    }
    body.appendChild(tropes);
  }

  private tropeItem(tropeId: string, name: string): HTMLLIElement {
    const item = document.createElement("li");
    item.dataset.trope = tropeId;
    const add = document.createElement("button");
    add.className = "explore-add";
    add.textContent = "+";
    add.addEventListener("click", () => this.callbacks.onAddTrope(tropeId, name));
    item.appendChild(add);
    const label = document.createElement("span");
    label.className = "explore-trope-name";
    label.textContent = name;
    item.appendChild(label);
    return item;
  }
}

function sectionHeading(text: string): HTMLElement {
  const heading = document.createElement("h3");
  heading.textContent = text;
  return heading;
}

function plainList(className: string, entries: string[]): HTMLUListElement {
  const list = document.createElement("ul");
  list.className = className;
  for (const entry of entries) {
    const item = document.createElement("li");
    item.textContent = entry;
    list.appendChild(item);
  }
  return list;
}
