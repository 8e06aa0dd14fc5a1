import { ApiClient } from "./api.js";
import { BoardState } from "./state.js";

/**
 * Debounced canvas persistence. Saves never block editing; when a save
 * fails the banner offers a retry while the board keeps its local state.
 */
export class Persistence {
  private api: ApiClient;
  private banner: HTMLElement;
  private debounceMs: number;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private saving = false;
  private queued: BoardState | null = null;

  constructor(api: ApiClient, banner: HTMLElement, debounceMs = 400) {
    this.api = api;
    this.banner = banner;
    this.debounceMs = debounceMs;
    this.banner.classList.add("retry-banner", "hidden");
  }

  /** Schedule a save of the current board, collapsing rapid edits. */
  schedule(state: BoardState): void {
    this.queued = state;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.flush();
    }, this.debounceMs);
  }

  async flush(): Promise<boolean> {
    if (this.saving || this.queued === null) return true;
    const state = this.queued;
    this.queued = null;
    this.saving = true;
    try {
      await this.api.saveCanvas(state.toDocument());
      this.hideBanner();
      return true;
    } catch (err) {
      this.showBanner(state, err);
      return false;
    } finally {
      this.saving = false;
    }
  }

  private showBanner(state: BoardState, err: unknown): void {
    this.banner.textContent = "";
    const label = document.createElement("span");
    label.textContent = `Save failed (${describe(err)}). Your edits are still on the board.`;
    this.banner.appendChild(label);
    const retry = document.createElement("button");
    retry.className = "retry-button";
    retry.textContent = "Retry";
    retry.addEventListener("click", () => {
      this.queued = this.queued ?? state;
      void this.flush();
    });
    this.banner.appendChild(retry);
    this.banner.classList.remove("hidden");
  }

  private hideBanner(): void {
    this.banner.classList.add("hidden");
    this.banner.textContent = "";
  }
}

function describe(err: unknown): string {
  if (err instanceof Error && err.message) return err.message;
  return String(err);
}
