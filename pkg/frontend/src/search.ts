import { ApiClient, SearchHit } from "./api.js";

export interface ComboboxCallbacks {
  onPick: (hit: SearchHit) => void;
}

/**
 * Debounced trope name combobox. Out-of-order responses are dropped so the
 * dropdown always reflects the latest fragment, in API order.
 */
export class TropeCombobox {
  private input: HTMLInputElement;
  private dropdown: HTMLUListElement;
  private api: ApiClient;
  private callbacks: ComboboxCallbacks;
  private debounceMs: number;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private requestToken = 0;

  constructor(
    container: HTMLElement,
    api: ApiClient,
    callbacks: ComboboxCallbacks,
    debounceMs = 150,
  ) {
    this.api = api;
    this.callbacks = callbacks;
    this.debounceMs = debounceMs;

    container.classList.add("combobox");
    this.input = document.createElement("input");
    this.input.className = "combobox-input";
    this.input.placeholder = "add trope by name";
    container.appendChild(this.input);

    this.dropdown = document.createElement("ul");
    this.dropdown.className = "combobox-dropdown hidden";
    container.appendChild(this.dropdown);

    this.input.addEventListener("input", () => this.onInput());
  }

  private onInput(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    const fragment = this.input.value.trim();
    if (!fragment) {
      this.requestToken++;
      this.hide();
      return;
    }
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.lookup(fragment);
    }, this.debounceMs);
  }

  private async lookup(fragment: string): Promise<void> {
    const token = ++this.requestToken;
    const response = await this.api.search(fragment);
    if (token !== this.requestToken) return;
    this.show(response.results);
  }

  private show(hits: SearchHit[]): void {
    this.dropdown.textContent = "";
    if (hits.length === 0) {
      this.hide();
      return;
    }
    for (const hit of hits) {
      const item = document.createElement("li");
      item.dataset.trope = hit.id;
      item.textContent = hit.name;
      item.addEventListener("click", () => {
        this.input.value = "";
        this.hide();
        this.callbacks.onPick(hit);
      });
      this.dropdown.appendChild(item);
    }
    this.dropdown.classList.remove("hidden");
  }

  private hide(): void {
    this.dropdown.classList.add("hidden");
    this.dropdown.textContent = "";
  }
}
