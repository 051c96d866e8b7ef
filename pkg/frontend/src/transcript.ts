/**
 * Transcript rendering. The text form reproduces the dialogue log
 * byte for byte: each command prefixed with "> ", output lines verbatim.
 */

import type { TranscriptEntry } from "./types.js";

export function transcriptText(entries: TranscriptEntry[]): string {
  const lines: string[] = [];
  for (const entry of entries) {
    lines.push(`> ${entry.command}`);
    lines.push(...entry.output);
  }
  return lines.map((l) => l + "\n").join("");
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** One <div class="entry"> per command, output preformatted. */
export function transcriptHtml(entries: TranscriptEntry[]): string {
  return entries
    .map((entry) => {
      const command = `<div class="cmd">&gt; ${escapeHtml(entry.command)}</div>`;
      if (entry.output.length === 0) {
        return `<div class="entry">${command}</div>`;
      }
      const body = escapeHtml(entry.output.join("\n"));
      return `<div class="entry">${command}<pre class="out">${body}</pre></div>`;
    })
    .join("\n");
}
