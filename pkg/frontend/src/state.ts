/** Client view state. Mirrors the server session after every
 * acknowledged action; holds no analytics results of its own. */

export type Selection =
  | { kind: "whole-record" }
  | { kind: "milestone"; id: string }
  | { kind: "edge"; id: string };

export type ColorScale = "red-yellow-green" | "colorblind-safe";

export interface ViewState {
  cohortId: string | null;
  selection: Selection;
  focusCode: string | null;
  r: number;
  locked: Set<string>;
  highlight: string;
  colorScale: ColorScale;
  timelineVersion: number;
}

export function initialState(): ViewState {
  return {
    cohortId: null,
    selection: { kind: "whole-record" },
    focusCode: null,
    r: 0,
    locked: new Set(),
    highlight: "",
    colorScale: "red-yellow-green",
    timelineVersion: 0,
  };
}

export function selectionKey(sel: Selection): string {
  return sel.kind === "whole-record" ? "whole-record" : `${sel.kind}:${sel.id}`;
}

type Listener = (state: ViewState) => void;

/** Minimal store: synchronous mutations plus a per-view request guard
 * that drops stale responses (at most one in-flight request per view). */
export class Store {
  private state = initialState();
  private listeners: Listener[] = [];
  private requestIds = new Map<string, number>();

  get(): ViewState {
    return this.state;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  update(patch: Partial<ViewState>): ViewState {
    this.state = { ...this.state, ...patch };
    for (const l of this.listeners) l(this.state);
    return this.state;
  }

  toggleLock(code: string): ViewState {
    const locked = new Set(this.state.locked);
    if (locked.has(code)) locked.delete(code);
    else locked.add(code);
    return this.update({ locked });
  }

  /** Returns a token for a view; a response should only be applied when
   * its token is still current for that view. */
  beginRequest(view: string): number {
    const id = (this.requestIds.get(view) ?? 0) + 1;
    this.requestIds.set(view, id);
    return id;
  }

  isCurrent(view: string, token: number): boolean {
    return this.requestIds.get(view) === token;
  }
}
