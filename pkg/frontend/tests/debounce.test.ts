import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';

import { DebouncedRequester } from '../src/debounce.js';

describe('debounced requester', () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it('coalesces a burst into one request after the quiet period', async () => {
    const calls: number[] = [];
    const applied: number[] = [];
    const requester = new DebouncedRequester<number, number>(
      async (n) => { calls.push(n); return n; },
      (n) => applied.push(n),
    );
    requester.schedule(1);
    vi.advanceTimersByTime(100);
    requester.schedule(2);
    vi.advanceTimersByTime(100);
    requester.schedule(3);
    expect(calls).toEqual([]);
    await vi.advanceTimersByTimeAsync(300);
    expect(calls).toEqual([3]);
    expect(applied).toEqual([3]);
  });

  it('discards a stale response when a newer request was issued', async () => {
    const resolvers: ((n: number) => void)[] = [];
    const applied: number[] = [];
    const requester = new DebouncedRequester<number, number>(
      () => new Promise<number>((resolve) => resolvers.push(resolve)),
      (n) => applied.push(n),
      () => undefined,
      0,
    );
    requester.schedule(1);
    await vi.advanceTimersByTimeAsync(1);
    requester.schedule(2);
    await vi.advanceTimersByTimeAsync(1);
    expect(resolvers.length).toBe(2);
    resolvers[1](22); // newest answers first
    await Promise.resolve();
    resolvers[0](11); // stale answer arrives late
    await Promise.resolve();
    expect(applied).toEqual([22]);
  });

  it('fireNow bypasses the quiet period', async () => {
    const applied: number[] = [];
    const requester = new DebouncedRequester<number, number>(
      async (n) => n * 10,
      (n) => applied.push(n),
    );
    await requester.fireNow(4);
    expect(applied).toEqual([40]);
  });

  it('errors only surface for the newest request', async () => {
    const errors: unknown[] = [];
    const requester = new DebouncedRequester<number, number>(
      async (n) => { throw new Error(`boom ${n}`); },
      () => undefined,
      (error) => errors.push(error),
      0,
    );
    requester.schedule(1);
    await vi.advanceTimersByTimeAsync(1);
    expect(errors).toHaveLength(1);
    expect(String(errors[0])).toContain('boom 1');
  });
});
