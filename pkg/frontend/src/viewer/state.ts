/** Viewer state: a deduplicated entry list with cursor, navigation, and the
 * unseen-count badge. Pure functions only; the poll loop applies them.
 */

import { FeedEntry, FeedPage } from "../api.js";

export interface ViewerState {
  entries: FeedEntry[];
  currentIndex: number;
  /** Highest index ever displayed; everything beyond it is "unseen". */
  highestSeenIndex: number;
  cursor: number | null;
  booth: string | null;
}

export function initialState(booth: string | null = null): ViewerState {
  return { entries: [], currentIndex: -1, highestSeenIndex: -1, cursor: null, booth };
}

export function unseenCount(state: ViewerState): number {
  return Math.max(0, state.entries.length - 1 - state.highestSeenIndex);
}

export function currentEntry(state: ViewerState): FeedEntry | null {
  return state.currentIndex >= 0 ? state.entries[state.currentIndex] : null;
}

/** Merge one feed page; on resync the list is rebuilt and deduplicated by
 * result_id, keeping the operator on the same image when it still exists.
 */
export function applyFeedPage(state: ViewerState, page: FeedPage): ViewerState {
  let entries: FeedEntry[];
  let currentIndex = state.currentIndex;
  let highestSeenIndex = state.highestSeenIndex;

  if (page.resync) {
    const seen = new Set<string>();
    entries = [];
    for (const entry of page.entries) {
      if (!seen.has(entry.result_id)) {
        seen.add(entry.result_id);
        entries.push(entry);
      }
    }
    const current = currentEntry(state);
    currentIndex = current
      ? entries.findIndex((e) => e.result_id === current.result_id)
      : -1;
    if (currentIndex < 0 && entries.length) currentIndex = 0;
    highestSeenIndex = currentIndex;
  } else {
    const known = new Set(state.entries.map((e) => e.result_id));
    const fresh = page.entries.filter((e) => !known.has(e.result_id));
    entries = fresh.length ? [...state.entries, ...fresh] : state.entries;
  }

  // First arrival on an idle screen is shown immediately.
  if (currentIndex < 0 && entries.length) {
    currentIndex = 0;
    highestSeenIndex = Math.max(highestSeenIndex, 0);
  }

  return {
    entries,
    currentIndex,
    highestSeenIndex,
    cursor: page.next_cursor,
    booth: state.booth,
  };
}

/** Arrow-key navigation; never leaves list bounds; seeing an entry marks it. */
export function navigate(state: ViewerState, delta: number): ViewerState {
  if (!state.entries.length) return state;
  const currentIndex = Math.min(
    state.entries.length - 1,
    Math.max(0, state.currentIndex + delta),
  );
  return {
    ...state,
    currentIndex,
    highestSeenIndex: Math.max(state.highestSeenIndex, currentIndex),
  };
}
