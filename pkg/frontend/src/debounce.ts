/**
 * Debounced request runner with stale-response discard.
 *
 * Slider movements schedule ranking calls; only the newest scheduled state
 * is sent after the quiet period, and a response is applied only when no
 * newer request has been issued since (sequence numbers, latest wins).
 */
export class DebouncedRequester<TInput, TResult> {
  private timer: ReturnType<typeof setTimeout> | undefined;
  private issued = 0;
  private applied = 0;

  constructor(
    private readonly run: (input: TInput) => Promise<TResult>,
    private readonly apply: (result: TResult) => void,
    private readonly onError: (error: unknown) => void = () => undefined,
    private readonly delayMs = 300,
  ) {}

  schedule(input: TInput): void {
    if (this.timer !== undefined) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = undefined;
      void this.fire(input);
    }, this.delayMs);
  }

  /** Send immediately, bypassing the quiet period (still latest-wins). */
  fireNow(input: TInput): Promise<void> {
    if (this.timer !== undefined) {
      clearTimeout(this.timer);
      this.timer = undefined;
    }
    return this.fire(input);
  }

  private async fire(input: TInput): Promise<void> {
    const seq = ++this.issued;
    try {
      const result = await this.run(input);
      if (seq > this.applied && seq === this.issued) {
        this.applied = seq;
        this.apply(result);
      }
    } catch (error) {
      if (seq === this.issued) this.onError(error);
    }
  }
}
