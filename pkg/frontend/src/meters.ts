// Motivation/ability as a three-state indicator, mirroring the trivalent
// activation values rather than pretending to a continuous scale.

export function bandOf(value: number): "low" | "neutral" | "high" {
  if (value <= -0.5) return "low";
  if (value >= 0.5) return "high";
  return "neutral";
}

export function renderMeters(
  container: HTMLElement,
  meters: { motivation: number; ability: number },
): void {
  container.innerHTML = "";
  container.classList.add("meters");
  for (const name of ["motivation", "ability"] as const) {
    const cell = document.createElement("div");
    cell.className = `meter ${name}`;
    cell.dataset.band = bandOf(meters[name]);
    cell.textContent = `${name}: ${cell.dataset.band}`;
    container.append(cell);
  }
}
