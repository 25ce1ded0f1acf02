import { Transport } from "../src/client.js";

/** In-memory transport capturing outgoing frames and replaying server ones. */
export class FakeTransport implements Transport {
  sent: string[] = [];
  closed = false;
  onmessage: ((event: { data: string }) => void) | null = null;
  onopen: (() => void) | null = null;
  onclose: (() => void) | null = null;

  open(): void {
    this.onopen?.();
  }

  push(frame: object): void {
    this.onmessage?.({ data: JSON.stringify(frame) });
  }

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
    this.onclose?.();
  }

  sentFrames(): any[] {
    return this.sent.map((s) => JSON.parse(s));
  }
}

export function sessionState(overrides: object = {}): object {
  return {
    type: "session_state",
    scene: "knowledge_town",
    pending_choices: [
      { id: "talk-sharman", text: "Talk to Sharman" },
      { id: "meet-rabbit", text: "Approach the rabbit" },
    ],
    meters: { motivation: 0, ability: 0 },
    ta_panel: null,
    concept_map_view: null,
    last_practice: null,
    cycle_index: 0,
    ...overrides,
  };
}
