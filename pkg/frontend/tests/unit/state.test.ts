import { readFileSync } from "node:fs";
import { resolve } from "node:path";

import { describe, expect, it } from "vitest";

import { BoardState } from "../../src/state.js";

function populated(): BoardState {
  const state = new BoardState("board-1", "tester");
  state.title = "Heist story";
  state.addCard("trope", "T10", 10, 20);
  state.addCard("text", "a daring night museum robbery", 200, 40);
  state.addCard("movie", "M1", 30, 260);
  state.addCard("title", "Museum After Dark", 220, 260);
  state.addCard("image", "https://example.test/moodboard.png", 420, 80);
  return state;
}

describe("BoardState document mapping", () => {
  it("round-trips five mixed cards through the wire format", () => {
    const state = populated();
    state.toggleSelected("card-1");
    state.toggleSelected("card-2");

    const restored = BoardState.fromDocument(state.toDocument(), "tester");
    expect(restored.projection()).toEqual(state.projection());
  });

  it("continues card numbering after a reload", () => {
    const restored = BoardState.fromDocument(populated().toDocument());
    const added = restored.addCard("text", "fresh");
    expect(restored.cards.map((c) => c.cardId)).toContain(added.cardId);
    expect(new Set(restored.cards.map((c) => c.cardId)).size).toBe(6);
  });

  it("projection ignores updated_at and writer", () => {
    const state = populated();
    const early = BoardState.fromDocument(state.toDocument("2026-01-01T00:00:00Z"), "a");
    const late = BoardState.fromDocument(state.toDocument("2026-06-01T00:00:00Z"), "b");
    expect(early.projection()).toEqual(late.projection());
  });
});

describe("input selection", () => {
  it("only trope and text cards can be selected", () => {
    const state = populated();
    for (const card of state.cards) state.toggleSelected(card.cardId);
    expect(state.selectedCards().map((c) => c.cardType)).toEqual(["trope", "text"]);
  });

  it("deleting a selected card removes it from the selection", () => {
    const state = populated();
    state.toggleSelected("card-1");
    state.deleteCard("card-1");
    expect(state.selectedCards()).toEqual([]);
  });

  it("deduplicates trope ids across cards", () => {
    const state = new BoardState("b");
    state.toggleSelected(state.addCard("trope", "T10").cardId);
    state.toggleSelected(state.addCard("trope", "T10").cardId);
    state.toggleSelected(state.addCard("trope", "T11").cardId);
    expect(state.selectedTropeIds()).toEqual(["T10", "T11"]);
  });
});

describe("buildQuery", () => {
  it("maps each slider position to the breadth field", () => {
    const state = populated();
    for (const breadth of [1, 2, 3] as const) {
      state.controls.breadth = breadth;
      expect(state.buildQuery(1).breadth).toBe(breadth);
    }
  });

  it("builds a text-only query when nothing is selected", () => {
    const state = populated();
    state.queryText = "  betrayal at midnight  ";
    const query = state.buildQuery(5);
    expect(query.input_tropes).toEqual([]);
    expect(query.text).toBe("betrayal at midnight");
  });

  it("joins selected text cards with the typed text", () => {
    const state = populated();
    state.toggleSelected("card-2");
    state.queryText = "rainy rooftops";
    expect(state.buildQuery(5).text).toBe(
      "a daring night museum robbery\nrainy rooftops",
    );
  });

  it("sends null text when everything is blank", () => {
    const state = populated();
    state.queryText = "   ";
    expect(state.buildQuery(5).text).toBeNull();
  });

  it("matches the documented request schema field-for-field", () => {
    // docs/openapi.json is the wire contract both sides pin their tests to
    const schemaPath = resolve(process.cwd(), "../docs/openapi.json");
    const openapi = JSON.parse(readFileSync(schemaPath, "utf-8"));
    const documented = openapi.components.schemas.SuggestRequest.properties;

    const state = populated();
    state.toggleSelected("card-1");
    state.queryText = "neon rain";
    const body = state.buildQuery(9) as unknown as Record<string, unknown>;

    expect(Object.keys(body).sort()).toEqual(Object.keys(documented).sort());
    expect(typeof body.breadth).toBe("number");
    expect(Array.isArray(body.input_tropes)).toBe(true);
  });

  it("assembles the full request body from the controls", () => {
    const state = populated();
    state.toggleSelected("card-1");
    state.controls.breadth = 3;
    state.controls.count = 7;
    state.controls.temperature = 0.5;
    state.controls.indexFilters = ["CrimeTropes"];
    state.controls.movieFilters = ["M1", "M2"];
    expect(state.buildQuery(42)).toEqual({
      input_tropes: ["T10"],
      text: null,
      breadth: 3,
      index_filters: ["CrimeTropes"],
      movie_filters: ["M1", "M2"],
      count: 7,
      temperature: 0.5,
      seed: 42,
      exclude: [],
    });
  });
});

describe("seed pinning", () => {
  it("mints a fresh seed while unpinned", () => {
    const state = new BoardState("b");
    state.recordSeed(7);
    expect(state.nextSeed(() => 123)).toBe(123);
  });

  it("reuses the last seed while pinned", () => {
    const state = new BoardState("b");
    state.controls.pinSeed = true;
    state.recordSeed(7);
    expect(state.nextSeed(() => 123)).toBe(7);
  });

  it("falls back to a fresh seed when pinned before any run", () => {
    const state = new BoardState("b");
    state.controls.pinSeed = true;
    expect(state.nextSeed(() => 123)).toBe(123);
  });
});
