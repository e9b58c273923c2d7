import init, { step_curve, compressed_power_curve, coupling_probe } from "./pkg/robust_overparam_web.js";

const num = (id) => Number(document.getElementById(id).value);

function plot(canvas, z, series, yRange) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const [lo, hi] = yRange;
  const px = (x) => ((x + 1) / 2) * (w - 20) + 10;
  const py = (y) => h - 10 - ((y - lo) / (hi - lo)) * (h - 20);
  ctx.strokeStyle = "#ddd";
  ctx.beginPath();
  ctx.moveTo(px(-1), py(0)); ctx.lineTo(px(1), py(0));
  ctx.moveTo(px(0), py(lo)); ctx.lineTo(px(0), py(hi));
  ctx.stroke();
  for (const { y, color } of series) {
    ctx.strokeStyle = color;
    ctx.beginPath();
    z.forEach((x, i) => {
      const v = Math.min(hi, Math.max(lo, y[i]));
      i === 0 ? ctx.moveTo(px(x), py(v)) : ctx.lineTo(px(x), py(v));
    });
    ctx.stroke();
  }
}

function guarded(outId, f) {
  const out = document.getElementById(outId);
  try {
    out.className = "";
    f(out);
  } catch (e) {
    out.className = "err";
    out.textContent = String(e);
  }
}

function runStep() {
  guarded("step-out", (out) => {
    const r = JSON.parse(step_curve(num("step-rho"), num("step-delta"), num("step-eps1"), 800));
    plot(document.getElementById("step-canvas"), r.z, [{ y: r.q, color: "#1f5fbf" }], [-0.2, 1.2]);
    const checks = r.checks.map((c) => `[${c.interval.map((v) => v.toFixed(4))}] err ${c.max_error.toExponential(2)} <= ${c.tolerance}: ${c.pass}`);
    out.textContent = `degree ${r.degree} (sign bound ${r.degree_bound}), gap ${r.sign_gap.toFixed(4)}\n${checks.join("\n")}`;
  });
}

function runPower() {
  guarded("power-out", (out) => {
    const r = JSON.parse(compressed_power_curve(num("power-s"), num("power-d"), 800));
    plot(document.getElementById("power-canvas"), r.z, [
      { y: r.exact, color: "#999" },
      { y: r.approx, color: "#c0392b" },
    ], [-1.1, 1.1]);
    out.textContent = `degree ${r.degree}, max error ${r.max_error.toExponential(3)}, envelope ${r.bound.toExponential(3)}`;
  });
}

function runCoupling() {
  guarded("cp-out", (out) => {
    const r = JSON.parse(coupling_probe(num("cp-m"), num("cp-d"), num("cp-r"), num("cp-n"), num("cp-seed")));
    out.textContent = `m ${r.m}, samples ${r.samples}: max |f - g| = ${r.gap.toExponential(4)}, flipped neurons ${(100 * r.flip_fraction).toFixed(1)}%`;
  });
}

await init();
document.getElementById("step-run").onclick = runStep;
document.getElementById("power-run").onclick = runPower;
document.getElementById("cp-run").onclick = runCoupling;
runStep();
runPower();
