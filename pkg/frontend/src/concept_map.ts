import { ConceptMapView } from "./protocol.js";

export type TeachCallback = (assignment: Record<string, string>) => void;

/**
 * Click-to-assign concept map editor: select a label, then click a blank.
 * Blanks listed in error_blanks render with the "error" class. The Teach
 * button submits exactly the current assignment; resubmitting an unchanged
 * assignment is allowed.
 */
export class ConceptMapEditor {
  assignment: Record<string, string>;
  private selectedLabel: string | null = null;

  constructor(
    private container: HTMLElement,
    private view: ConceptMapView,
    private onTeach: TeachCallback,
    private isConnected: () => boolean = () => true,
  ) {
    this.assignment = { ...view.assignment };
    this.render();
  }

  private render(): void {
    const c = this.container;
    c.innerHTML = "";
    c.classList.add("concept-map");

    const labels = document.createElement("div");
    labels.className = "labels";
    for (const label of this.view.labels) {
      const btn = document.createElement("button");
      btn.className = "label";
      btn.dataset.label = label;
      btn.textContent = label;
      btn.addEventListener("click", () => {
        this.selectedLabel = label;
        labels.querySelectorAll(".label").forEach((el) => el.classList.remove("selected"));
        btn.classList.add("selected");
      });
      labels.append(btn);
    }

    const blanks = document.createElement("div");
    blanks.className = "blanks";
    for (const blank of this.view.blanks) {
      const row = document.createElement("div");
      row.className = "blank";
      row.dataset.blank = blank.id;
      if (this.view.error_blanks.includes(blank.id)) {
        row.classList.add("error");
      }
      const prompt = document.createElement("span");
      prompt.className = "prompt";
      prompt.textContent = blank.prompt;
      const slot = document.createElement("button");
      slot.className = "slot";
      slot.textContent = this.assignment[blank.id] ?? "…";
      slot.addEventListener("click", () => {
        if (this.selectedLabel === null) return;
        this.assignment[blank.id] = this.selectedLabel;
        slot.textContent = this.selectedLabel;
      });
      row.append(prompt, slot);
      blanks.append(row);
    }

    const teach = document.createElement("button");
    teach.className = "teach";
    teach.textContent = "Teach";
    teach.disabled = !this.isConnected();
    teach.addEventListener("click", () => {
      if (!this.isConnected()) return;
      this.onTeach({ ...this.assignment });
    });

    c.append(labels, blanks, teach);
  }
}
