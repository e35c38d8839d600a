export class Debouncer {
    constructor(delayMs = 150) {
        this.delayMs = delayMs;
    }
    run(op) {
        if (this.handle !== undefined)
            clearTimeout(this.handle);
        this.handle = setTimeout(op, this.delayMs);
    }
    cancel() {
        if (this.handle !== undefined)
            clearTimeout(this.handle);
        this.handle = undefined;
    }
}
