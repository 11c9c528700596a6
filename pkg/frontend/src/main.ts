import { ApiClient } from "./api.js";
import {
  renderCurves,
  renderGlyph,
  renderIsolation,
  renderMap,
  renderNeighborhood,
} from "./panels.js";
import { DashboardStore, lastNDays } from "./store.js";
import type { Meta } from "./types.js";

const DEFAULT_WINDOW_DAYS = 20;

function dayOffset(meta: Meta, iso: string): number {
  return Math.round(
    (Date.parse(`${iso}T00:00:00Z`) - Date.parse(`${meta.first_date}T00:00:00Z`)) / 86_400_000,
  );
}

function offsetDay(meta: Meta, offset: number): string {
  return new Date(Date.parse(`${meta.first_date}T00:00:00Z`) + offset * 86_400_000)
    .toISOString()
    .slice(0, 10);
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  const metaResp = await api.meta();
  const meta = metaResp.data;
  const store = new DashboardStore(api, meta, DEFAULT_WINDOW_DAYS);

  const $ = (id: string) => document.getElementById(id) as HTMLElement;
  const citySelect = document.getElementById("city-select") as HTMLSelectElement;
  const windowLabel = $("window-label");
  const handleA = document.getElementById("window-a") as HTMLInputElement;
  const handleB = document.getElementById("window-b") as HTMLInputElement;
  const presetButton = document.getElementById("preset-last") as HTMLButtonElement;
  const modeSelect = document.getElementById("mode-select") as HTMLSelectElement;

  const maxOffset = dayOffset(meta, meta.last_date);
  for (const handle of [handleA, handleB]) {
    handle.min = "0";
    handle.max = String(maxOffset);
  }

  const syncControls = () => {
    const { a, b } = store.state.window;
    handleA.value = String(dayOffset(meta, a));
    handleB.value = String(dayOffset(meta, b));
    windowLabel.textContent = `${a} .. ${b}`;
  };

  store.onChange(() => {
    renderGlyph(store, $("glyph-panel"));
    renderCurves(store, $("curves-panel"));
    renderIsolation(store, $("isolation-panel"));
    renderMap(store, $("map-panel"));
    renderNeighborhood(store, $("neighborhood-panel"));
    syncControls();
  });

  const cities = (await api.cities()).data;
  for (const city of cities) {
    const option = document.createElement("option");
    option.value = city.name;
    option.textContent = city.has_cases ? city.name : `${city.name} (no cases)`;
    citySelect.appendChild(option);
  }
  citySelect.addEventListener("change", () => {
    void store.selectCity(citySelect.value);
  });

  const dragFromHandles = () => {
    const lo = Math.min(Number(handleA.value), Number(handleB.value));
    const hi = Math.max(Number(handleA.value), Number(handleB.value));
    void store.dragWindow(offsetDay(meta, lo), offsetDay(meta, hi));
  };
  handleA.addEventListener("change", dragFromHandles);
  handleB.addEventListener("change", dragFromHandles);

  presetButton.addEventListener("click", () => {
    const preset = lastNDays(meta, DEFAULT_WINDOW_DAYS);
    void store.dragWindow(preset.a, preset.b);
  });

  modeSelect.addEventListener("change", () => {
    void store.setMode(modeSelect.value === "raw" ? "raw" : "unit_square");
  });

  syncControls();
  if (cities.length > 0) {
    const firstWithCases = cities.find((c) => c.has_cases) ?? cities[0]!;
    citySelect.value = firstWithCases.name;
    await store.selectCity(firstWithCases.name);
  }
}

void boot();
