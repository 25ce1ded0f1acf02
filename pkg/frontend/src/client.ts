import {
  ClientFrame,
  ServerFrame,
  parseServerFrame,
  validateClientFrame,
} from "./protocol.js";

/** Minimal transport surface so tests can inject a fake socket. */
export interface Transport {
  send(data: string): void;
  close(): void;
  onmessage: ((event: { data: string }) => void) | null;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
}

export type FrameHandler = (frame: ServerFrame) => void;

/**
 * One session over one connection. Reconnecting means constructing a new
 * client: the server replays nothing, it sends a fresh snapshot on start.
 */
export class SessionClient {
  connected = false;
  private handlers: FrameHandler[] = [];

  constructor(private transport: Transport) {
    transport.onopen = () => {
      this.connected = true;
      this.send({ type: "start" });
    };
    transport.onmessage = (event) => {
      const frame = parseServerFrame(event.data);
      for (const handler of this.handlers) handler(frame);
    };
    transport.onclose = () => {
      this.connected = false;
    };
  }

  onFrame(handler: FrameHandler): void {
    this.handlers.push(handler);
  }

  send(frame: ClientFrame): void {
    if (!this.connected) throw new Error("not connected");
    this.transport.send(JSON.stringify(validateClientFrame(frame)));
  }

  choose(id: string): void {
    this.send({ type: "choice", id });
  }

  teach(assignment: Record<string, string>): void {
    this.send({ type: "teach", assignment });
  }

  idleAck(): void {
    this.send({ type: "idle_ack" });
  }

  close(): void {
    this.transport.close();
  }
}
