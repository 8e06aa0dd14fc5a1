import { CanvasCard, CanvasDocument, CardType, SuggestRequest } from "./api.js";

export interface Card {
  cardId: string;
  cardType: CardType;
  x: number;
  y: number;
  payload: string;
  selectedForInput: boolean;
}

export interface Controls {
  breadth: 1 | 2 | 3;
  count: number;
  temperature: number;
  indexFilters: string[];
  movieFilters: string[];
  pinSeed: boolean;
}

export function defaultControls(): Controls {
  return {
    breadth: 2,
    count: 5,
    temperature: 0.02,
    indexFilters: [],
    movieFilters: [],
    pinSeed: false,
  };
}

const SELECTABLE: CardType[] = ["trope", "text"];

/**
 * Client-side mirror of a canvas document plus the transient control state
 * that feeds suggestion queries. All mutations go through methods so the
 * selection invariant (only trope/text cards are query inputs) holds.
 */
export class BoardState {
  canvasId: string;
  title: string;
  cards: Card[] = [];
  controls: Controls = defaultControls();
  queryText = "";
  lastSeed: number | null = null;
  writer: string;
  private nextCardNumber = 1;

  constructor(canvasId: string, writer = "local") {
    this.canvasId = canvasId;
    this.title = "";
    this.writer = writer;
  }

  static fromDocument(doc: CanvasDocument, writer = "local"): BoardState {
    const state = new BoardState(doc.id, writer);
    state.title = doc.title;
    state.cards = doc.cards.map((card) => ({
      cardId: card.card_id,
      cardType: card.card_type,
      x: card.position.x,
      y: card.position.y,
      payload: card.payload,
      selectedForInput: card.selected_for_input,
    }));
    state.nextCardNumber = nextFreeNumber(state.cards);
    return state;
  }

  toDocument(updatedAt?: string): CanvasDocument {
    return {
      id: this.canvasId,
      title: this.title,
      cards: this.cards.map(toWireCard),
      updated_at: updatedAt ?? new Date().toISOString(),
      writer: this.writer,
    };
  }

  /** Stable value object for equality checks; ignores volatile metadata. */
  projection(): { id: string; title: string; cards: CanvasCard[] } {
    const cards = this.cards.map(toWireCard);
    cards.sort((a, b) => (a.card_id < b.card_id ? -1 : a.card_id > b.card_id ? 1 : 0));
    return { id: this.canvasId, title: this.title, cards };
  }

  addCard(cardType: CardType, payload: string, x = 40, y = 40): Card {
    const card: Card = {
      cardId: `card-${this.nextCardNumber++}`,
      cardType,
      x,
      y,
      payload,
      selectedForInput: false,
    };
    this.cards.push(card);
    return card;
  }

  getCard(cardId: string): Card | undefined {
    return this.cards.find((c) => c.cardId === cardId);
  }

  deleteCard(cardId: string): void {
    this.cards = this.cards.filter((c) => c.cardId !== cardId);
  }

  moveCard(cardId: string, x: number, y: number): void {
    const card = this.getCard(cardId);
    if (card) {
      card.x = x;
      card.y = y;
    }
  }

  editCard(cardId: string, payload: string): void {
    const card = this.getCard(cardId);
    if (card) card.payload = payload;
  }

  /** No-op for card types that can never be query inputs. */
  toggleSelected(cardId: string): void {
    const card = this.getCard(cardId);
    if (card && SELECTABLE.includes(card.cardType)) {
      card.selectedForInput = !card.selectedForInput;
    }
  }

  selectedCards(): Card[] {
    return this.cards.filter(
      (c) => c.selectedForInput && SELECTABLE.includes(c.cardType),
    );
  }

  selectedTropeIds(): string[] {
    const seen = new Set<string>();
    const ids: string[] = [];
    for (const card of this.selectedCards()) {
      if (card.cardType === "trope" && !seen.has(card.payload)) {
        seen.add(card.payload);
        ids.push(card.payload);
      }
    }
    return ids;
  }

  /** Selected text cards plus the free-text box, joined into one query text. */
  queryTextParts(): string {
    const parts = this.selectedCards()
      .filter((c) => c.cardType === "text")
      .map((c) => c.payload.trim())
      .filter((p) => p.length > 0);
    const typed = this.queryText.trim();
    if (typed) parts.push(typed);
    return parts.join("\n");
  }

  buildQuery(seed: number | null): SuggestRequest {
    const text = this.queryTextParts();
    return {
      input_tropes: this.selectedTropeIds(),
      text: text.length > 0 ? text : null,
      breadth: this.controls.breadth,
      index_filters: [...this.controls.indexFilters],
      movie_filters: [...this.controls.movieFilters],
      count: this.controls.count,
      temperature: this.controls.temperature,
      seed,
      exclude: [],
    };
  }

  /** Seed for the next suggest click: reuse the pinned one or mint a fresh one. */
  nextSeed(random: () => number = randomSeed): number {
    if (this.controls.pinSeed && this.lastSeed !== null) return this.lastSeed;
    return random();
  }

  recordSeed(seed: number): void {
    this.lastSeed = seed;
  }
}

function toWireCard(card: Card): CanvasCard {
  return {
    card_id: card.cardId,
    card_type: card.cardType,
    position: { x: card.x, y: card.y },
    payload: card.payload,
    selected_for_input: card.selectedForInput,
  };
}

function nextFreeNumber(cards: Card[]): number {
  let highest = 0;
  for (const card of cards) {
    const match = /^card-(\d+)$/.exec(card.cardId);
    if (match) highest = Math.max(highest, parseInt(match[1], 10));
  }
  return highest + 1;
}

function randomSeed(): number {
  return Math.floor(Math.random() * 2 ** 31);
}
