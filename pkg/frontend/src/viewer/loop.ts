/** Long-polling feed loop with backoff and cursor resume. */

import { ApiClient } from "../api.js";
import { ViewerState, applyFeedPage, initialState } from "./state.js";

export interface ViewerLoopOptions {
  api: ApiClient;
  booth?: string | null;
  render: (state: ViewerState) => void;
  timeoutS?: number;
  backoffMs?: number[];
  setTimeoutImpl?: (fn: () => void, ms: number) => unknown;
}

const DEFAULT_BACKOFF_MS = [500, 1000, 2000, 5000];

export class ViewerLoop {
  state: ViewerState;
  private readonly api: ApiClient;
  private readonly renderFn: (state: ViewerState) => void;
  private readonly timeoutS: number;
  private readonly backoffMs: number[];
  private readonly setTimeoutImpl: (fn: () => void, ms: number) => unknown;
  private failures = 0;
  private stopped = true;

  constructor(options: ViewerLoopOptions) {
    this.api = options.api;
    this.state = initialState(options.booth ?? null);
    this.renderFn = options.render;
    this.timeoutS = options.timeoutS ?? 20;
    this.backoffMs = options.backoffMs ?? DEFAULT_BACKOFF_MS;
    this.setTimeoutImpl = options.setTimeoutImpl ?? ((fn, ms) => setTimeout(fn, ms));
  }

  /** One poll: park on the feed, merge the page, render. Returns the delay
   * before the next cycle (0 after success, backoff after a failure). */
  async runOnce(): Promise<number> {
    try {
      const page = await this.api.feed(this.state.cursor, this.state.booth, this.timeoutS);
      this.failures = 0;
      this.state = applyFeedPage(this.state, page);
      this.renderFn(this.state);
      return 0;
    } catch {
      // Network loss: back off, then resume from the last cursor.
      const delay = this.backoffMs[Math.min(this.failures, this.backoffMs.length - 1)];
      this.failures += 1;
      return delay;
    }
  }

  start(): void {
    this.stopped = false;
    const cycle = async () => {
      if (this.stopped) return;
      const delay = await this.runOnce();
      if (this.stopped) return;
      this.setTimeoutImpl(cycle, delay);
    };
    void cycle();
  }

  stop(): void {
    this.stopped = true;
  }

  navigateAndRender(mutate: (state: ViewerState) => ViewerState): void {
    this.state = mutate(this.state);
    this.renderFn(this.state);
  }
}
