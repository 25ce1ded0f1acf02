import { SessionClient, Transport } from "./client.js";
import { ConceptMapEditor } from "./concept_map.js";
import { renderMeters } from "./meters.js";
import { ServerFrame, SessionStateFrame } from "./protocol.js";
import { renderTaPanel } from "./ta_panel.js";

export interface AppElements {
  scene: HTMLElement;
  choices: HTMLElement;
  panel: HTMLElement;
  conceptMap: HTMLElement;
  meters: HTMLElement;
  practice: HTMLElement;
  status: HTMLElement;
}

/**
 * Wires protocol frames to the page. Every rendered datum comes from a
 * received frame; the app itself keeps no domain knowledge.
 */
export class App {
  client: SessionClient;
  private pendingCue = false;
  private lastState: SessionStateFrame | null = null;

  constructor(private el: AppElements, transport: Transport) {
    this.client = new SessionClient(transport);
    this.client.onFrame((frame) => this.handle(frame));
  }

  private handle(frame: ServerFrame): void {
    switch (frame.type) {
      case "session_state":
        this.lastState = frame;
        this.renderState(frame);
        break;
      case "cue":
        // keep choices locked until the student acknowledges the agent
        this.pendingCue = true;
        this.syncChoiceLock();
        renderTaPanel(this.el.panel, frame, () => {
          this.pendingCue = false;
          this.syncChoiceLock();
        });
        break;
      case "concept_map":
        new ConceptMapEditor(this.el.conceptMap, frame,
          (assignment) => this.client.teach(assignment),
          () => this.client.connected);
        break;
      case "meters":
        renderMeters(this.el.meters, frame);
        break;
      case "practice_result":
        this.el.practice.textContent = frame.success
          ? "The agent solved the mission task!"
          : `The agent got it wrong: ${frame.error_blanks.join(", ")}`;
        this.el.practice.dataset.success = String(frame.success);
        break;
      case "error":
        this.el.status.textContent = `error: ${frame.message}`;
        break;
    }
  }

  private renderState(state: SessionStateFrame): void {
    this.el.scene.textContent = state.scene;
    this.el.choices.innerHTML = "";
    for (const choice of state.pending_choices) {
      const btn = document.createElement("button");
      btn.className = "choice";
      btn.dataset.choice = choice.id;
      btn.textContent = choice.text;
      btn.addEventListener("click", () => this.client.choose(choice.id));
      this.el.choices.append(btn);
    }
    renderMeters(this.el.meters, state.meters);
    this.syncChoiceLock();
  }

  private syncChoiceLock(): void {
    this.el.choices
      .querySelectorAll<HTMLButtonElement>("button.choice")
      .forEach((btn) => { btn.disabled = this.pendingCue; });
  }

  choicesEnabled(): boolean {
    const btns = [...this.el.choices.querySelectorAll<HTMLButtonElement>("button.choice")];
    return btns.length > 0 && btns.every((b) => !b.disabled);
  }

  currentState(): SessionStateFrame | null {
    return this.lastState;
  }
}
