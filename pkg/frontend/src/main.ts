import { ApiClient } from "./api";
import { App, Mount, View } from "./app";
import { Store } from "./state";

const TRANSITION_MS = 300;

function mountInto(root: HTMLElement): Mount {
  const panes = new Map<View, HTMLElement>();
  for (const view of ["scatter", "focus", "timeline", "survival", "attributes", "table"] as View[]) {
    const pane = root.querySelector<HTMLElement>(`[data-view="${view}"]`);
    if (pane) panes.set(view, pane);
  }
  const noticeEl = root.querySelector<HTMLElement>("[data-notice]");
  return {
    show(view, markup) {
      const pane = panes.get(view);
      if (!pane) return;
      // scatter and focus share a slot; fade to emphasize the scale change
      if (view === "scatter" || view === "focus") {
        const other = panes.get(view === "scatter" ? "focus" : "scatter");
        if (other && other !== pane) other.innerHTML = "";
        pane.style.transition = `opacity ${TRANSITION_MS}ms`;
        pane.style.opacity = "0";
        pane.innerHTML = markup;
        requestAnimationFrame(() => {
          pane.style.opacity = "1";
        });
      } else {
        pane.innerHTML = markup;
      }
    },
    notice(message) {
      if (noticeEl) {
        noticeEl.textContent = message;
        noticeEl.classList.add("visible");
        setTimeout(() => noticeEl.classList.remove("visible"), 4000);
      }
    },
  };
}

function wire(root: HTMLElement, app: App): void {
  root.addEventListener("click", (ev) => {
    const target = ev.target as HTMLElement;
    const mark = target.closest<HTMLElement>("[data-code]");
    if (mark) {
      const code = mark.dataset.code as string;
      if (ev.shiftKey) app.toggleLock(code);
      else void app.focusOn(code);
      return;
    }
    const timelineEl = target.closest<HTMLElement>("[data-kind][data-id]");
    if (timelineEl) {
      const kind = timelineEl.dataset.kind as "milestone" | "edge";
      void app.selectTimeline({ kind, id: timelineEl.dataset.id as string });
      return;
    }
    const sortHeader = target.closest<HTMLElement>("[data-sort]");
    if (sortHeader) {
      void app.setTableSort(sortHeader.dataset.sort as "seq_count" | "occ_count" | "correlation");
      return;
    }
    if (target.closest("[data-view='focus']")) {
      void app.exitFocus(); // background click leaves the focused mode
    }
  });

  const slider = root.querySelector<HTMLInputElement>("[data-r-slider]");
  if (slider) {
    slider.addEventListener("input", () => void app.setR(Number(slider.value)));
  }
  const search = root.querySelector<HTMLInputElement>("[data-search]");
  if (search) {
    search.addEventListener("input", () => void app.setHighlight(search.value));
  }
  const scaleToggle = root.querySelector<HTMLSelectElement>("[data-color-scale]");
  if (scaleToggle) {
    scaleToggle.addEventListener("change", () =>
      void app.setColorScale(scaleToggle.value as "red-yellow-green" | "colorblind-safe")
    );
  }
  const queryForm = root.querySelector<HTMLFormElement>("[data-query-form]");
  if (queryForm) {
    queryForm.addEventListener("submit", (ev) => {
      ev.preventDefault();
      const data = new FormData(queryForm);
      void app.openCohort(String(data.get("dataset") ?? ""), {
        inclusion: String(data.get("inclusion") ?? "")
          .split(",")
          .map((s) => s.trim())
          .filter(Boolean),
        outcome: String(data.get("outcome") ?? "")
          .split(",")
          .map((s) => s.trim())
          .filter(Boolean),
        lookback_days: Number(data.get("lookback") ?? 0),
      });
    });
  }
}

export function boot(root: HTMLElement, baseUrl = ""): App {
  const app = new App(new ApiClient(baseUrl), new Store(), mountInto(root));
  wire(root, app);
  return app;
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) boot(root);
}
