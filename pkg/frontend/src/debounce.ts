export class Debouncer {
  private handle: ReturnType<typeof setTimeout> | undefined;

  constructor(public delayMs = 150) {}

  run(op: () => void): void {
    if (this.handle !== undefined) clearTimeout(this.handle);
    this.handle = setTimeout(op, this.delayMs);
  }

  cancel(): void {
    if (this.handle !== undefined) clearTimeout(this.handle);
    this.handle = undefined;
  }
}
