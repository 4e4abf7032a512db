import init, { Designer, classical, analyze, centeredPhases } from "./pkg/unipol_demo.js";

const $ = (id) => document.getElementById(id);
const BATCH = 10;
let active = null;

function setupCanvas(canvas) {
  const dpr = window.devicePixelRatio || 1;
  const w = canvas.clientWidth, h = canvas.clientHeight;
  canvas.width = w * dpr;
  canvas.height = h * dpr;
  const ctx = canvas.getContext("2d");
  ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
  ctx.clearRect(0, 0, w, h);
  return { ctx, w, h };
}

// Line or dot plot of ys against index, with min/max labels on the y axis.
function plot(canvas, ys, { log = false, dots = false, floor = -Infinity, color = "#1f5fa8" } = {}) {
  const { ctx, w, h } = setupCanvas(canvas);
  const vals = ys.map((v) => (log ? Math.log10(Math.max(v, 1e-300)) : Math.max(v, floor)))
    .filter(Number.isFinite);
  if (vals.length === 0) return;
  let lo = Math.min(...vals), hi = Math.max(...vals);
  if (hi - lo < 1e-12) { lo -= 1; hi += 1; }
  const pad = { l: 52, r: 8, t: 8, b: 18 };
  const x = (i) => pad.l + (ys.length === 1 ? 0 : (i / (ys.length - 1)) * (w - pad.l - pad.r));
  const y = (v) => pad.t + (1 - (v - lo) / (hi - lo)) * (h - pad.t - pad.b);

  ctx.strokeStyle = "#bbb";
  ctx.strokeRect(pad.l, pad.t, w - pad.l - pad.r, h - pad.t - pad.b);
  ctx.fillStyle = "#555";
  ctx.font = "11px system-ui";
  const fmt = (v) => (log ? (10 ** v).toExponential(2) : v.toFixed(1));
  ctx.fillText(fmt(hi), 2, pad.t + 9);
  ctx.fillText(fmt(lo), 2, h - pad.b);
  ctx.fillText(String(ys.length - 1), w - pad.r - 24, h - 4);
  ctx.fillText("0", pad.l, h - 4);

  ctx.strokeStyle = ctx.fillStyle = color;
  ctx.beginPath();
  let started = false;
  ys.forEach((raw, i) => {
    const v = log ? Math.log10(Math.max(raw, 1e-300)) : Math.max(raw, floor);
    if (!Number.isFinite(v)) return;
    if (dots) {
      ctx.fillRect(x(i) - 1.5, y(v) - 1.5, 3, 3);
    } else if (started) {
      ctx.lineTo(x(i), y(v));
    } else {
      ctx.moveTo(x(i), y(v));
      started = true;
    }
  });
  if (!dots) ctx.stroke();
}

function show(report, extra = "") {
  const mf = report.meritFactor();
  $("stats").textContent =
    `N            ${report.len()}\n` +
    `ISL          ${report.isl().toExponential(6)}\n` +
    `PSL          ${report.psl().toFixed(6)}\n` +
    `merit factor ${Number.isNaN(mf) ? "undefined" : mf.toFixed(4)}` + extra;
  // Skip lag 0 (always 0 dB); exact zeros are drawn at the floor.
  plot($("sidelobes"), Array.from(report.sidelobesDb()).slice(1), { floor: -80, color: "#a33" });
  plot($("phaseplot"), Array.from(centeredPhases(report)), { dots: true, color: "#2a7" });
}

function fail(err) {
  $("error").textContent = err instanceof Error ? err.message : String(err);
}

function stop() {
  active = null;
  $("run").disabled = false;
  $("stop").disabled = true;
}

function runDesign() {
  $("error").textContent = "";
  let designer;
  try {
    designer = new Designer($("algo").value, Number($("n").value), Number($("seed").value) >>> 0, $("full").checked);
  } catch (e) {
    return fail(e);
  }
  const total = Math.max(1, Number($("iters").value) | 0);
  const token = {};
  active = token;
  $("run").disabled = true;
  $("stop").disabled = false;
  const started = performance.now();

  const tick = () => {
    if (active !== token) { designer.free(); return; }
    const remaining = total - designer.iterations();
    designer.advance(Math.min(BATCH, remaining));
    const trace = Array.from(designer.islTrace());
    plot($("trace"), trace, { log: true });
    const secs = ((performance.now() - started) / 1000).toFixed(2);
    show(designer.report(), `\niterations   ${designer.iterations()} / ${total} (${secs} s)\ninitial ISL  ${trace[0].toExponential(6)}`);
    if (designer.iterations() < total) {
      requestAnimationFrame(tick);
    } else {
      designer.free();
      stop();
    }
  };
  requestAnimationFrame(tick);
}

function runStatic(make) {
  stop();
  $("error").textContent = "";
  try {
    const report = make();
    show(report);
    setupCanvas($("trace"));
  } catch (e) {
    fail(e);
  }
}

await init();
$("run").addEventListener("click", runDesign);
$("stop").addEventListener("click", stop);
$("gen").addEventListener("click", () => runStatic(() => classical($("family").value, Number($("fn").value))));
$("analyze").addEventListener("click", () => runStatic(() => analyze($("phases").value)));
runStatic(() => classical("barker", 13));
