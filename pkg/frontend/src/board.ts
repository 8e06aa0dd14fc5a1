import { CardType } from "./api.js";
import { BoardState, Card } from "./state.js";

export interface BoardCallbacks {
  onChange: () => void;
  onExploreMovie: (movieId: string) => void;
  onExploreTrope: (tropeId: string) => void;
}

const CARD_LABELS: Record<CardType, string> = {
  trope: "Trope",
  text: "Text",
  movie: "Movie",
  title: "Title",
  image: "Image",
};

/** Drag-and-drop card surface; board edits are local-first. */
export class BoardPane {
  private root: HTMLElement;
  private state: BoardState;
  private callbacks: BoardCallbacks;
  private tropeNames = new Map<string, string>();
  private dragging: { cardId: string; offsetX: number; offsetY: number } | null = null;

  constructor(root: HTMLElement, state: BoardState, callbacks: BoardCallbacks) {
    this.root = root;
    this.state = state;
    this.callbacks = callbacks;
    this.root.classList.add("board");
    this.root.addEventListener("mousemove", (e) => this.onMouseMove(e));
    this.root.addEventListener("mouseup", () => this.onMouseUp());
    this.root.addEventListener("mouseleave", () => this.onMouseUp());
  }

  setState(state: BoardState): void {
    this.state = state;
    this.render();
  }

  /** Display names for trope payloads; ids are shown until a name is known. */
  learnName(tropeId: string, name: string): void {
    this.tropeNames.set(tropeId, name);
  }

  addCard(cardType: CardType, payload: string): Card {
    const offset = 30 + (this.state.cards.length % 8) * 28;
    const card = this.state.addCard(cardType, payload, offset, offset);
    this.render();
    this.callbacks.onChange();
    return card;
  }

  render(): void {
    this.root.textContent = "";
    for (const card of this.state.cards) {
      this.root.appendChild(this.renderCard(card));
    }
  }

  private renderCard(card: Card): HTMLElement {
    const el = document.createElement("div");
    el.className = `card card-${card.cardType}`;
    el.dataset.cardId = card.cardId;
    el.dataset.cardType = card.cardType;
    el.style.left = `${card.x}px`;
    el.style.top = `${card.y}px`;
    if (card.selectedForInput) el.classList.add("selected");

    const header = document.createElement("div");
    header.className = "card-header";
    header.textContent = CARD_LABELS[card.cardType];
    header.addEventListener("mousedown", (e) => this.onDragStart(e, card));
    el.appendChild(header);

    const body = document.createElement("div");
    body.className = "card-body";
    body.textContent = this.cardText(card);
    el.appendChild(body);

    if (card.cardType === "trope" || card.cardType === "text") {
      el.addEventListener("click", (e) => {
        if ((e.target as HTMLElement).closest("button")) return;
        this.state.toggleSelected(card.cardId);
        this.render();
        this.callbacks.onChange();
      });
    }
    if (card.cardType === "text" || card.cardType === "title") {
      body.addEventListener("dblclick", () => this.editCard(card));
    }
    if (card.cardType === "movie") {
      el.appendChild(this.iconButton("info", "ⓘ", () =>
        this.callbacks.onExploreMovie(card.payload),
      ));
    }
    if (card.cardType === "trope") {
      el.appendChild(this.iconButton("info", "ⓘ", () =>
        this.callbacks.onExploreTrope(card.payload),
      ));
    }
    el.appendChild(this.iconButton("delete", "×", () => {
      this.state.deleteCard(card.cardId);
      this.render();
      this.callbacks.onChange();
    }));
    return el;
  }

  private cardText(card: Card): string {
    if (card.cardType === "trope") {
      return this.tropeNames.get(card.payload) ?? card.payload;
    }
    return card.payload;
  }

  private iconButton(kind: string, glyph: string, onClick: () => void): HTMLButtonElement {
    const button = document.createElement("button");
    button.className = `card-button card-${kind}`;
    button.textContent = glyph;
    button.addEventListener("click", (e) => {
      e.stopPropagation();
      onClick();
    });
    return button;
  }

  private editCard(card: Card): void {
    const edited = window.prompt("Edit card", card.payload);
    if (edited !== null) {
      this.state.editCard(card.cardId, edited);
      this.render();
      this.callbacks.onChange();
    }
  }

  private onDragStart(e: MouseEvent, card: Card): void {
    e.preventDefault();
    this.dragging = {
      cardId: card.cardId,
      offsetX: e.clientX - card.x,
      offsetY: e.clientY - card.y,
    };
  }

  private onMouseMove(e: MouseEvent): void {
    if (!this.dragging) return;
    const x = Math.max(0, e.clientX - this.dragging.offsetX);
    const y = Math.max(0, e.clientY - this.dragging.offsetY);
    this.state.moveCard(this.dragging.cardId, x, y);
    const el = this.root.querySelector<HTMLElement>(
      `[data-card-id="${this.dragging.cardId}"]`,
    );
    if (el) {
      el.style.left = `${x}px`;
      el.style.top = `${y}px`;
    }
  }

  private onMouseUp(): void {
    if (!this.dragging) return;
    this.dragging = null;
    this.callbacks.onChange();
  }
}
