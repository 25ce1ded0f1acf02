import { App, AppElements } from "./app.js";
import { Transport } from "./client.js";

function grab(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (el === null) throw new Error(`missing #${id}`);
  return el;
}

export function boot(url = `ws://${location.host}/session`): App {
  const elements: AppElements = {
    scene: grab("scene"),
    choices: grab("choices"),
    panel: grab("ta-panel"),
    conceptMap: grab("concept-map"),
    meters: grab("meters"),
    practice: grab("practice"),
    status: grab("status"),
  };
  const socket = new WebSocket(url) as unknown as Transport;
  return new App(elements, socket);
}

if (typeof window !== "undefined" && document.getElementById("scene")) {
  boot();
}
