/** DOM rendering for the results viewer: full-screen image, pose thumbnail
 * bottom-left, new-image badge bottom-right, optional souvenir overlay.
 */

import { ApiClient } from "../api.js";
import { PoseDocument, poseThumbnailSvg } from "../pose.js";
import { ViewerState, currentEntry, unseenCount } from "./state.js";

export interface ViewerDomOptions {
  badgeColor?: string;
  souvenirMode?: boolean;
}

export class ViewerRenderer {
  private readonly poseCache = new Map<string, string>();

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly options: ViewerDomOptions = {},
  ) {}

  render(state: ViewerState): void {
    const entry = currentEntry(state);
    this.root.innerHTML = "";

    if (!entry) {
      const empty = document.createElement("div");
      empty.className = "viewer-empty";
      empty.textContent = "Waiting for the first image...";
      this.root.appendChild(empty);
      return;
    }

    const image = document.createElement("img");
    image.className = "viewer-image";
    image.src = entry.image_url;
    image.alt = `generated image ${entry.result_id}`;
    image.addEventListener("error", () => {
      image.replaceWith(this.placeholder(entry.result_id));
    });
    this.root.appendChild(image);

    const pose = document.createElement("div");
    pose.className = "pose-thumbnail";
    this.root.appendChild(pose);
    void this.fillPoseThumbnail(pose, entry.pose_url);

    const unseen = unseenCount(state);
    if (unseen > 0) {
      const badge = document.createElement("div");
      badge.className = "new-badge";
      badge.style.background = this.options.badgeColor ?? "#d02020";
      badge.textContent = String(unseen);
      this.root.appendChild(badge);
    }

    if (this.options.souvenirMode) {
      const souvenir = document.createElement("div");
      souvenir.className = "souvenir-overlay";
      souvenir.textContent = `Take it home: ${new URL(entry.image_url, window.location.href)}`;
      this.root.appendChild(souvenir);
    }

    const position = document.createElement("div");
    position.className = "position-indicator";
    position.textContent = `${state.currentIndex + 1} / ${state.entries.length}`;
    this.root.appendChild(position);
  }

  private placeholder(resultId: string): HTMLElement {
    const div = document.createElement("div");
    div.className = "viewer-placeholder";
    div.textContent = `image unavailable (${resultId})`;
    return div;
  }

  private async fillPoseThumbnail(node: HTMLElement, poseUrl: string): Promise<void> {
    let svg = this.poseCache.get(poseUrl);
    if (!svg) {
      try {
        const doc = (await this.api.posePayload(poseUrl)) as unknown as PoseDocument;
        svg = poseThumbnailSvg(doc, 160, 160);
        this.poseCache.set(poseUrl, svg);
      } catch {
        return; // thumbnail is decorative; skip on fetch errors
      }
    }
    node.innerHTML = svg;
  }
}
