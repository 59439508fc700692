/**
 * DOM rendering for the view models. No math here: view models carry every
 * number already formatted or ready to format.
 */

import { fmt3 } from "./viewmodel.js";
import type {
  DashboardModel,
  PreferenceGridModel,
  ResultViewModel,
} from "./viewmodel.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function numberCell(value: number): HTMLTableCellElement {
  const cell = el("td", "num", fmt3(value));
  cell.title = String(value); // full precision on hover
  return cell;
}

// ---------------------------------------------------------------------------
// Preference grid
// ---------------------------------------------------------------------------

export interface GridCallbacks {
  onWeight: (criterionId: string, value: number) => void;
  onScore: (criterionId: string, alternativeId: string, value: number) => void;
  onSubmit: () => void;
}

export function renderPreferenceGrid(
  container: HTMLElement,
  grid: PreferenceGridModel,
  complete: boolean,
  callbacks: GridCallbacks,
): void {
  container.replaceChildren();
  const table = el("table", "grid");
  const head = el("tr");
  head.append(el("th", "", "criterion"), el("th", "", "weight"));
  for (const alternative of grid.alternatives) {
    head.append(el("th", "", alternative.name));
  }
  table.append(head);

  for (const row of grid.weights) {
    const tr = el("tr");
    const label = el("td", "criterion", row.name);
    if (row.description) label.title = row.description;
    tr.append(label);

    const weightCell = el("td", "weight");
    const slider = el("input") as HTMLInputElement;
    slider.type = "range";
    slider.min = "0";
    slider.max = "1";
    slider.step = "0.05";
    slider.value = row.value === null ? "0" : String(row.value);
    slider.addEventListener("input", () =>
      callbacks.onWeight(row.criterionId, Number(slider.value)),
    );
    const readout = el("span", "readout", row.value === null ? "unset" : fmt3(row.value));
    weightCell.append(slider, readout);
    tr.append(weightCell);

    for (const alternative of grid.alternatives) {
      const cell = grid.cells.find(
        (c) => c.criterionId === row.criterionId && c.alternativeId === alternative.id,
      )!;
      const td = el("td", "score");
      const select = el("select") as HTMLSelectElement;
      const placeholder = el("option", "", "choose") as HTMLOptionElement;
      placeholder.value = "";
      placeholder.disabled = true;
      placeholder.selected = cell.value === null;
      select.append(placeholder);
      for (const [label2, value] of cell.options) {
        const option = el("option", "", `${label2} (${value})`) as HTMLOptionElement;
        option.value = String(value);
        option.selected = cell.value === value;
        select.append(option);
      }
      select.addEventListener("change", () =>
        callbacks.onScore(cell.criterionId, cell.alternativeId, Number(select.value)),
      );
      td.append(select);
      tr.append(td);
    }
    table.append(tr);
  }
  container.append(table);

  const submit = el("button", "submit", "submit preferences") as HTMLButtonElement;
  submit.disabled = !complete;
  submit.addEventListener("click", callbacks.onSubmit);
  container.append(submit);
}

export function renderEvaluationStrip(
  container: HTMLElement,
  evaluation: Record<string, number>,
): void {
  container.replaceChildren();
  container.append(el("h3", "", "your evaluation"));
  const table = el("table", "strip");
  const head = el("tr");
  const row = el("tr");
  for (const [alternativeId, value] of Object.entries(evaluation)) {
    head.append(el("th", "", alternativeId));
    row.append(numberCell(value));
  }
  table.append(head, row);
  container.append(table);
}

// ---------------------------------------------------------------------------
// Round dashboard
// ---------------------------------------------------------------------------

export function renderDashboard(container: HTMLElement, model: DashboardModel): void {
  container.replaceChildren();
  container.append(el("h3", "", `round ${model.round}`));

  if (model.revisionRequired) {
    container.append(el("div", "banner revise", "revision required"));
  } else if (model.allMajority) {
    container.append(el("div", "banner ok", "all participants at majority consensus"));
  }

  for (const member of model.members) {
    const section = el("section", member.isViewer ? "member viewer" : "member");
    const status = member.majorityReached ? "majority" : "below majority";
    section.append(
      el(
        "h4",
        "",
        `${member.label}: ${member.consensusCount} in consensus (${status})`,
      ),
    );
    const list = el("div", "badges");
    for (const badge of member.badges) {
      const item = el("div", badge.inConsensus ? "badge consensus" : "badge dissent");
      item.append(el("span", "name", badge.alternativeName));
      const bar = el("div", "bar");
      const fill = el("div", "fill");
      fill.style.width = `${(badge.barFraction * 100).toFixed(1)}%`;
      const threshold = el("div", "threshold");
      threshold.style.left = `${(badge.thresholdFraction * 100).toFixed(1)}%`;
      bar.append(fill, threshold);
      item.append(bar);
      const distance = el("span", "distance", `d=${fmt3(badge.distance)}`);
      distance.title = String(badge.distance);
      const weight = el("span", "weight", `w=${fmt3(badge.weight)}`);
      weight.title = String(badge.weight);
      item.append(distance, weight);
      list.append(item);
    }
    section.append(list);
    container.append(section);
  }

  if (model.peers.length > 0) {
    const peers = el("div", "peers");
    peers.append(el("h4", "", "group status"));
    for (const peer of model.peers) {
      peers.append(
        el(
          "div",
          peer.majorityReached ? "peer ok" : "peer pending",
          `${peer.label}: ${peer.majorityReached ? "majority" : "below majority"}`,
        ),
      );
    }
    container.append(peers);
  }
}

// ---------------------------------------------------------------------------
// Result view
// ---------------------------------------------------------------------------

export function renderResult(container: HTMLElement, model: ResultViewModel): void {
  container.replaceChildren();
  container.append(el("h3", "", "final ranking"));
  if (model.forced) {
    container.append(
      el("div", "banner forced", "forced result: round limit reached with dissent"),
    );
  }
  const table = el("table", "result");
  const head = el("tr");
  head.append(el("th", "", "rank"), el("th", "", "alternative"));
  for (const dmId of model.participantIds) {
    head.append(el("th", "", dmId));
  }
  head.append(el("th", "", "total"));
  table.append(head);
  for (const row of model.rows) {
    const tr = el("tr");
    tr.append(el("td", "", String(row.rank)), el("td", "", row.alternativeName));
    for (const contribution of row.contributions) {
      tr.append(numberCell(contribution.value));
    }
    tr.append(numberCell(row.total));
    table.append(tr);
  }
  container.append(table);
}
