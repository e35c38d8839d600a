// DOM view: composition line, numbered candidate strip, committed text and
// the stats panel. Keyboard-only operation: letters type, digits select,
// space takes the first candidate, Enter flushes, arrows page.
import { Debouncer } from "./debounce.js";
import { PAGE_SIZE } from "./state.js";
const STORAGE_KEY = "omwa.committed";
export class View {
    constructor(session, root) {
        this.session = session;
        this.debouncer = new Debouncer(150);
        this.root = root;
        this.build();
        document.addEventListener("keydown", (e) => this.onKey(e));
    }
    build() {
        this.root.innerHTML = `
      <header><h1>omwa</h1>
        <p class="hint">type pinyin · digits pick · space takes #1 · enter flushes ·
        arrows page · backspace edits · esc cancels</p></header>
      <section class="composer">
        <div class="buffer" id="buffer">&nbsp;</div>
        <div class="candidates" id="candidates"></div>
        <div class="meta"><span id="page"></span><span id="notice" class="notice"></span></div>
      </section>
      <section class="output"><h2>committed</h2><div id="committed" class="committed"></div></section>
      <section class="stats">
        <h2>vocabulary</h2>
        <div id="stats-meta" class="stats-meta"></div>
        <svg id="curve" viewBox="0 0 200 40" preserveAspectRatio="none"></svg>
        <table class="words"><tbody id="stats-words"></tbody></table>
      </section>`;
        this.bufferEl = this.root.querySelector("#buffer");
        this.candidatesEl = this.root.querySelector("#candidates");
        this.pageEl = this.root.querySelector("#page");
        this.noticeEl = this.root.querySelector("#notice");
        this.committedEl = this.root.querySelector("#committed");
        this.statsWordsEl = this.root.querySelector("#stats-words");
        this.statsMetaEl = this.root.querySelector("#stats-meta");
        this.curveEl = this.root.querySelector("#curve");
    }
    onKey(e) {
        const s = this.session;
        if (e.key >= "a" && e.key <= "z" && !e.ctrlKey && !e.metaKey && !e.altKey) {
            s.buffer += e.key;
            this.render();
            this.debouncer.run(() => void s.convert());
            e.preventDefault();
        }
        else if (e.key === "'") {
            s.buffer += "'";
            this.render();
            this.debouncer.run(() => void s.convert());
            e.preventDefault();
        }
        else if (e.key >= "1" && e.key <= String(PAGE_SIZE)) {
            void s.selectDigit(Number(e.key));
            e.preventDefault();
        }
        else if (e.key === " ") {
            if (s.candidates.length)
                void s.space();
            e.preventDefault();
        }
        else if (e.key === "Enter") {
            void s.enter();
            e.preventDefault();
        }
        else if (e.key === "Backspace") {
            void s.backspace();
            e.preventDefault();
        }
        else if (e.key === "Escape") {
            s.escape();
            e.preventDefault();
        }
        else if (e.key === "ArrowRight" || e.key === "ArrowDown") {
            s.nextPage();
            e.preventDefault();
        }
        else if (e.key === "ArrowLeft" || e.key === "ArrowUp") {
            s.prevPage();
            e.preventDefault();
        }
    }
    render() {
        const s = this.session;
        this.bufferEl.textContent = s.stagedText + (s.buffer || "") || " ";
        this.candidatesEl.innerHTML = "";
        s.pageCandidates().forEach((cand, i) => {
            const div = document.createElement("div");
            div.className = "cand";
            div.textContent = `${i + 1}.${cand.text}`;
            div.title = cand.score.toFixed(3);
            div.onclick = () => void s.selectDigit(i + 1);
            this.candidatesEl.appendChild(div);
        });
        this.pageEl.textContent = s.candidates.length
            ? `page ${s.page + 1}/${s.pageCount()}`
            : "";
        this.noticeEl.textContent = s.notice;
        this.committedEl.textContent = s.committed;
        localStorage.setItem(STORAGE_KEY, s.committed);
        this.renderStats();
    }
    renderStats() {
        const s = this.session;
        this.statsWordsEl.innerHTML = "";
        const top = s.stats?.top ?? [];
        const maxIwl = top.length ? top[0][1] : 1;
        for (const [word, iwl] of top) {
            const tr = document.createElement("tr");
            const bar = Math.max(2, Math.round((iwl / maxIwl) * 100));
            tr.innerHTML = `<td class="w">${word}</td>` +
                `<td class="bar"><span style="width:${bar}%"></span></td>` +
                `<td class="iwl">${iwl.toFixed(1)}</td>`;
            this.statsWordsEl.appendChild(tr);
        }
        const sess = s.sessionStats;
        this.statsMetaEl.textContent = sess
            ? `commits ${sess.commits} · session top-1 ${sess.top1_mean.toFixed(3)} · ` +
                `vocab ${s.stats?.vocab_size ?? "?"}`
            : "no commits yet";
        this.renderCurve(sess?.recent_top1 ?? []);
    }
    renderCurve(points) {
        this.curveEl.innerHTML = "";
        if (points.length < 2)
            return;
        const w = 200, h = 40, pad = 2;
        const step = (w - 2 * pad) / (points.length - 1);
        const coords = points
            .map((p, i) => `${(pad + i * step).toFixed(1)},${(h - pad - p * (h - 2 * pad)).toFixed(1)}`)
            .join(" ");
        const line = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
        line.setAttribute("points", coords);
        line.setAttribute("class", "curve-line");
        this.curveEl.appendChild(line);
    }
    static restoreCommitted() {
        return localStorage.getItem(STORAGE_KEY) ?? "";
    }
}
