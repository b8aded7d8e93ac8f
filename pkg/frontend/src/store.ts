// Minimal observable state container plus the in-flight request guard that
// drops stale recommendation/preview responses.

export type Listener = () => void;

export class Store<S extends object> {
  private state: S;
  private listeners = new Set<Listener>();

  constructor(initial: S) {
    this.state = initial;
  }

  get(): S {
    return this.state;
  }

  set(patch: Partial<S>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of [...this.listeners]) {
      listener();
    }
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }
}

/**
 * Monotonic token issuer: concurrent in-flight requests resolve
 * last-write-wins, because only the most recently issued token is
 * considered current when a response lands.
 */
export class SequenceGate {
  private seq = 0;

  next(): number {
    return ++this.seq;
  }

  isCurrent(token: number): boolean {
    return token === this.seq;
  }
}
