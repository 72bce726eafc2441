import { ApiClient, ApiError } from "./api";
import { renderAttributes } from "./render/attributes";
import { renderFocus } from "./render/focus";
import { renderScatter } from "./render/scatter";
import { renderSurvival } from "./render/survival";
import { renderTable, TableSort } from "./render/table";
import { renderTimeline } from "./render/timeline";
import { Selection, selectionKey, Store } from "./state";
import type { QuerySpec } from "./types";

export type View = "scatter" | "focus" | "timeline" | "survival" | "attributes" | "table";

export interface Mount {
  show(view: View, markup: string): void;
  notice(message: string): void;
}

/** Controller: every user action is exactly one API call followed by a
 * re-render from the acknowledged response. The store mirrors server
 * state; no analytics value is ever computed client-side. */
export class App {
  private tableSort: TableSort = "seq_count";

  constructor(
    private api: ApiClient,
    public store: Store,
    private mount: Mount
  ) {}

  private fail(err: unknown): void {
    if (err instanceof ApiError) {
      this.mount.notice(`service error ${err.status}: ${JSON.stringify(err.detail)}`);
    } else {
      this.mount.notice(String(err));
    }
  }

  private cohort(): string {
    const id = this.store.get().cohortId;
    if (!id) throw new Error("no cohort loaded");
    return id;
  }

  async openCohort(datasetId: string, spec: QuerySpec): Promise<void> {
    try {
      const summary = await this.api.query(datasetId, spec);
      this.store.update({
        cohortId: summary.cohort_id,
        selection: { kind: "whole-record" },
        focusCode: null,
        timelineVersion: 0,
        locked: new Set(),
      });
      if (summary.warning) this.mount.notice(summary.warning);
      await this.refreshAll();
    } catch (err) {
      this.fail(err);
    }
  }

  async refreshAll(): Promise<void> {
    await Promise.all([
      this.refreshScatterOrFocus(),
      this.refreshTimeline(),
      this.refreshSurvival(),
      this.refreshAttributes(),
      this.refreshTable(),
    ]);
  }

  private async refreshScatterOrFocus(): Promise<void> {
    const state = this.store.get();
    if (state.focusCode) return this.refreshFocus();
    const token = this.store.beginRequest("scatter");
    try {
      const payload = await this.api.scatter(this.cohort(), state.r);
      if (!this.store.isCurrent("scatter", token)) return; // stale
      this.store.update({ timelineVersion: payload.timeline_version });
      this.mount.show(
        "scatter",
        renderScatter(payload, {
          colorScale: state.colorScale,
          locked: state.locked,
          highlight: state.highlight,
        })
      );
    } catch (err) {
      this.fail(err);
    }
  }

  private async refreshFocus(): Promise<void> {
    const state = this.store.get();
    if (!state.focusCode) return;
    const token = this.store.beginRequest("focus");
    try {
      const payload = await this.api.focus(this.cohort(), state.focusCode);
      if (!this.store.isCurrent("focus", token)) return;
      this.mount.show(
        "focus",
        renderFocus(payload, { colorScale: state.colorScale, locked: state.locked })
      );
    } catch (err) {
      // unknown code: stay on the current view
      this.fail(err);
    }
  }

  private async refreshTimeline(): Promise<void> {
    try {
      const payload = await this.api.timeline(this.cohort());
      const state = this.store.get();
      this.mount.show(
        "timeline",
        renderTimeline(payload, {
          colorScale: state.colorScale,
          selected:
            state.selection.kind === "whole-record" ? null : selectionKey(state.selection),
        })
      );
    } catch (err) {
      this.fail(err);
    }
  }

  private async refreshSurvival(): Promise<void> {
    try {
      this.mount.show("survival", renderSurvival(await this.api.survival(this.cohort())));
    } catch (err) {
      this.fail(err);
    }
  }

  private async refreshAttributes(): Promise<void> {
    try {
      this.mount.show("attributes", renderAttributes(await this.api.attributes(this.cohort())));
    } catch (err) {
      this.fail(err);
    }
  }

  private async refreshTable(): Promise<void> {
    try {
      const rows = await this.api.eventsTable(this.cohort(), this.tableSort, 200);
      this.mount.show("table", renderTable(rows, this.tableSort));
    } catch (err) {
      this.fail(err);
    }
  }

  /** R-slider: re-fetch the scatter with the new value. */
  async setR(r: number): Promise<void> {
    this.store.update({ r });
    await this.refreshScatterOrFocus();
  }

  /** Click on a mark: transition to the focused view for that type. */
  async focusOn(code: string): Promise<void> {
    this.store.update({ focusCode: code });
    await this.refreshFocus();
  }

  /** Background click in focus mode: back to the overview scatter. */
  async exitFocus(): Promise<void> {
    this.store.update({ focusCode: null });
    await this.refreshScatterOrFocus();
  }

  /** Timeline click: acknowledge the selection server-side, then
   * refresh every context-dependent view. */
  async selectTimeline(sel: Selection): Promise<void> {
    try {
      const body =
        sel.kind === "whole-record"
          ? { whole_record: true }
          : sel.kind === "milestone"
            ? { milestone: sel.id }
            : { edge: sel.id };
      const ack = await this.api.select(this.cohort(), body);
      this.store.update({ selection: sel, timelineVersion: ack.timeline_version });
      await Promise.all([this.refreshScatterOrFocus(), this.refreshTimeline(), this.refreshTable()]);
    } catch (err) {
      this.fail(err);
    }
  }

  /** Add-milestone action from a locked mark: creates a new timeline
   * version server-side and resets the selection. */
  async addMilestone(edgeId: string, code: string): Promise<void> {
    try {
      const ack = await this.api.addMilestone(this.cohort(), edgeId, code);
      this.store.update({
        timelineVersion: ack.timeline_version,
        selection: { kind: "whole-record" },
        focusCode: null,
      });
      await this.refreshAll();
    } catch (err) {
      this.fail(err);
    }
  }

  toggleLock(code: string): void {
    this.store.toggleLock(code);
    void this.refreshScatterOrFocus();
  }

  async setTableSort(sort: TableSort): Promise<void> {
    this.tableSort = sort;
    await this.refreshTable();
  }

  async setColorScale(scale: "red-yellow-green" | "colorblind-safe"): Promise<void> {
    this.store.update({ colorScale: scale });
    await Promise.all([this.refreshScatterOrFocus(), this.refreshTimeline()]);
  }

  async setHighlight(term: string): Promise<void> {
    this.store.update({ highlight: term });
    await this.refreshScatterOrFocus();
  }
}
