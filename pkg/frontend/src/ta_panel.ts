import { CueFrame } from "./protocol.js";

// simple stand-ins for the agent portrait
export const EXPRESSION_ICONS: Record<string, string> = {
  happy: "😊",
  sad: "😢",
  neutral: "😐",
  encouraging: "💪",
};

/**
 * Render a persuasion cue into the panel container. The panel carries a
 * dismiss button; the host app keeps choices disabled until it is clicked.
 */
export function renderTaPanel(
  container: HTMLElement,
  cue: CueFrame,
  onDismiss?: () => void,
): void {
  let icon = EXPRESSION_ICONS[cue.expression];
  if (icon === undefined) {
    console.warn(`unknown cue expression ${JSON.stringify(cue.expression)}, using neutral`);
    icon = EXPRESSION_ICONS.neutral;
  }
  container.innerHTML = "";
  container.classList.add("ta-panel", "visible");

  const face = document.createElement("span");
  face.className = "ta-expression";
  face.dataset.expression = cue.expression in EXPRESSION_ICONS ? cue.expression : "neutral";
  face.textContent = icon;

  const text = document.createElement("p");
  text.className = "ta-text";
  text.textContent = cue.text;

  const dismiss = document.createElement("button");
  dismiss.className = "ta-dismiss";
  dismiss.textContent = "Continue";
  dismiss.addEventListener("click", () => {
    container.classList.remove("visible");
    container.innerHTML = "";
    onDismiss?.();
  });

  container.append(face, text, dismiss);
}
