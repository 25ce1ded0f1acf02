// Session protocol frames. The client consumes and produces exactly these;
// everything rendered must be traceable to a received frame.

export interface ChoiceOption {
  id: string;
  text: string;
}

export interface SessionStateFrame {
  type: "session_state";
  scene: string;
  pending_choices: ChoiceOption[];
  meters: { motivation: number; ability: number };
  ta_panel: unknown;
  concept_map_view: ConceptMapView | null;
  last_practice: { success: boolean; error_blanks: string[] } | null;
  cycle_index: number;
}

export interface CueFrame {
  type: "cue";
  cue_id: string;
  text: string;
  expression: string;
}

export interface ConceptMapView {
  map_id: string;
  blanks: { id: string; prompt: string }[];
  labels: string[];
  assignment: Record<string, string>;
  error_blanks: string[];
}

export interface ConceptMapFrame extends ConceptMapView {
  type: "concept_map";
}

export interface PracticeResultFrame {
  type: "practice_result";
  success: boolean;
  error_blanks: string[];
}

export interface MetersFrame {
  type: "meters";
  motivation: number;
  ability: number;
}

export interface ErrorFrame {
  type: "error";
  message: string;
}

export type ServerFrame =
  | SessionStateFrame
  | CueFrame
  | ConceptMapFrame
  | PracticeResultFrame
  | MetersFrame
  | ErrorFrame;

export type ClientFrame =
  | { type: "start" }
  | { type: "choice"; id: string }
  | { type: "teach"; assignment: Record<string, string> }
  | { type: "idle_ack" };

const SERVER_TYPES = new Set([
  "session_state", "cue", "concept_map", "practice_result", "meters", "error",
]);

export function parseServerFrame(raw: string): ServerFrame {
  const obj = JSON.parse(raw);
  if (typeof obj !== "object" || obj === null || !SERVER_TYPES.has(obj.type)) {
    throw new Error(`unknown server frame: ${raw.slice(0, 80)}`);
  }
  return obj as ServerFrame;
}

export function validateClientFrame(frame: ClientFrame): ClientFrame {
  switch (frame.type) {
    case "start":
    case "idle_ack":
      return frame;
    case "choice":
      if (typeof frame.id !== "string" || frame.id.length === 0) {
        throw new Error("choice frame needs a non-empty id");
      }
      return frame;
    case "teach":
      for (const [blank, label] of Object.entries(frame.assignment)) {
        if (typeof blank !== "string" || typeof label !== "string") {
          throw new Error("teach assignment must map blank ids to labels");
        }
      }
      return frame;
    default:
      throw new Error(`unknown client frame type`);
  }
}
