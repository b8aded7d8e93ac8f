// Inline SVG glyphs for idiom and task pickers, keyed by the catalog's
// illustrationRef values. Static assets by another name; unknown refs get
// a neutral placeholder so an edited catalog never breaks the grid.

const VB = `viewBox="0 0 40 28" class="glyph" aria-hidden="true"`;

const GLYPHS: Record<string, string> = {
  "illustrations/idioms/bar.svg": `<svg ${VB}><rect x="4" y="12" width="7" height="14"/><rect x="16" y="4" width="7" height="22"/><rect x="28" y="16" width="7" height="10"/></svg>`,
  "illustrations/idioms/grouped-bar.svg": `<svg ${VB}><rect x="4" y="10" width="5" height="16"/><rect x="10" y="16" width="5" height="10"/><rect x="22" y="6" width="5" height="20"/><rect x="28" y="13" width="5" height="13"/></svg>`,
  "illustrations/idioms/stacked-bar.svg": `<svg ${VB}><rect x="6" y="14" width="8" height="12"/><rect x="6" y="6" width="8" height="8" opacity=".5"/><rect x="24" y="17" width="8" height="9"/><rect x="24" y="9" width="8" height="8" opacity=".5"/></svg>`,
  "illustrations/idioms/line.svg": `<svg ${VB}><polyline points="3,22 13,12 23,16 37,5" fill="none" stroke-width="2"/></svg>`,
  "illustrations/idioms/multi-line.svg": `<svg ${VB}><polyline points="3,22 13,12 23,16 37,5" fill="none" stroke-width="2"/><polyline points="3,14 13,20 23,8 37,13" fill="none" stroke-width="2" opacity=".5"/></svg>`,
  "illustrations/idioms/area.svg": `<svg ${VB}><path d="M3 24 L13 12 L23 17 L37 6 L37 24 Z" opacity=".6"/><polyline points="3,24 13,12 23,17 37,6" fill="none" stroke-width="2"/></svg>`,
  "illustrations/idioms/scatter.svg": `<svg ${VB}><circle cx="8" cy="20" r="2.4"/><circle cx="15" cy="11" r="2.4"/><circle cx="23" cy="16" r="2.4"/><circle cx="30" cy="7" r="2.4"/><circle cx="34" cy="13" r="2.4"/></svg>`,
  "illustrations/idioms/bubble.svg": `<svg ${VB}><circle cx="10" cy="18" r="5" opacity=".7"/><circle cx="23" cy="10" r="3" opacity=".7"/><circle cx="32" cy="18" r="7" opacity=".4"/></svg>`,
  "illustrations/idioms/pie.svg": `<svg ${VB}><circle cx="20" cy="14" r="11" opacity=".35"/><path d="M20 14 L20 3 A11 11 0 0 1 30.5 17.5 Z"/></svg>`,
  "illustrations/idioms/donut.svg": `<svg ${VB}><circle cx="20" cy="14" r="11" opacity=".35"/><path d="M20 14 L20 3 A11 11 0 0 1 30.5 17.5 Z"/><circle cx="20" cy="14" r="5" fill="var(--panel, #fff)"/></svg>`,
  "illustrations/idioms/histogram.svg": `<svg ${VB}><rect x="4" y="16" width="8" height="10"/><rect x="12" y="6" width="8" height="20"/><rect x="20" y="10" width="8" height="16"/><rect x="28" y="20" width="8" height="6"/></svg>`,
  "illustrations/idioms/box-plot.svg": `<svg ${VB}><line x1="20" y1="3" x2="20" y2="8" stroke-width="2"/><rect x="12" y="8" width="16" height="12" fill="none" stroke-width="2"/><line x1="12" y1="14" x2="28" y2="14" stroke-width="2"/><line x1="20" y1="20" x2="20" y2="25" stroke-width="2"/></svg>`,
  "illustrations/idioms/heatmap.svg": `<svg ${VB}><rect x="5" y="4" width="9" height="6" opacity=".9"/><rect x="15" y="4" width="9" height="6" opacity=".4"/><rect x="25" y="4" width="9" height="6" opacity=".6"/><rect x="5" y="11" width="9" height="6" opacity=".3"/><rect x="15" y="11" width="9" height="6" opacity=".8"/><rect x="25" y="11" width="9" height="6" opacity=".2"/><rect x="5" y="18" width="9" height="6" opacity=".5"/><rect x="15" y="18" width="9" height="6" opacity=".25"/><rect x="25" y="18" width="9" height="6" opacity=".95"/></svg>`,
  "illustrations/idioms/radar.svg": `<svg ${VB}><polygon points="20,3 34,11 29,25 11,25 6,11" fill="none" stroke-width="1"/><polygon points="20,7 29,12 26,21 14,21 11,12" opacity=".5"/></svg>`,

  "illustrations/tasks/comparison.svg": `<svg ${VB}><rect x="7" y="8" width="10" height="18"/><rect x="23" y="14" width="10" height="12" opacity=".5"/></svg>`,
  "illustrations/tasks/trend-over-time.svg": `<svg ${VB}><polyline points="4,23 14,17 24,19 36,6" fill="none" stroke-width="2"/><polygon points="36,6 30,7 34,12" /></svg>`,
  "illustrations/tasks/distribution.svg": `<svg ${VB}><path d="M3 25 C 12 25, 12 5, 20 5 C 28 5, 28 25, 37 25" fill="none" stroke-width="2"/></svg>`,
  "illustrations/tasks/part-to-whole.svg": `<svg ${VB}><circle cx="20" cy="14" r="11" opacity=".3"/><path d="M20 14 L20 3 A11 11 0 0 1 31 14 Z"/></svg>`,
  "illustrations/tasks/correlation.svg": `<svg ${VB}><circle cx="8" cy="21" r="2"/><circle cx="14" cy="17" r="2"/><circle cx="21" cy="13" r="2"/><circle cx="28" cy="9" r="2"/><line x1="5" y1="24" x2="35" y2="5" stroke-width="1" opacity=".5"/></svg>`,
  "illustrations/tasks/ranking.svg": `<svg ${VB}><rect x="5" y="4" width="22" height="5"/><rect x="5" y="11" width="16" height="5" opacity=".7"/><rect x="5" y="18" width="9" height="5" opacity=".4"/></svg>`,
  "illustrations/tasks/deviation.svg": `<svg ${VB}><line x1="20" y1="3" x2="20" y2="25" stroke-width="1" opacity=".5"/><rect x="8" y="6" width="12" height="5"/><rect x="20" y="14" width="9" height="5" opacity=".6"/></svg>`,
};

const FALLBACK = `<svg ${VB}><rect x="6" y="5" width="28" height="18" rx="3" fill="none" stroke-width="2"/></svg>`;

export function illustration(ref: string): string {
  return GLYPHS[ref] ?? FALLBACK;
}
