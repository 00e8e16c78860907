/** DOM rendering for the kiosk's four screens. */

import { KioskView } from "./machine.js";

export interface KioskDomHandlers {
  onConsentTapped: () => void;
  onArtworkTapped: (artworkId: string) => void;
  onRetryTapped: () => void;
}

const CONSENT_TEXT =
  "Pick an artwork, strike a pose, and the installation reimagines the " +
  "artwork around your pose. Only an anonymous stick-figure pose and the " +
  "generated image are stored - never your photo. Tap to begin.";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

export function renderKiosk(
  root: HTMLElement,
  video: HTMLVideoElement,
  view: KioskView,
  handlers: KioskDomHandlers,
): void {
  root.innerHTML = "";
  root.dataset.screen = view.screen;

  if (view.banner && view.screen !== "retry" && view.screen !== "camera-error") {
    root.appendChild(el("div", "banner", view.banner));
  }

  switch (view.screen) {
    case "consent": {
      const screen = el("section", "screen consent");
      screen.appendChild(el("h1", undefined, "Reimagine an artwork with your body"));
      screen.appendChild(el("p", "consent-text", CONSENT_TEXT));
      const button = el("button", "primary big-target", "Touch to begin");
      button.addEventListener("click", handlers.onConsentTapped);
      screen.appendChild(button);
      root.appendChild(screen);
      break;
    }
    case "gallery": {
      const screen = el("section", "screen gallery");
      screen.appendChild(el("h2", undefined, "Choose an artwork to reimagine"));
      const grid = el("div", "masonry");
      for (const artwork of view.galleryEntries) {
        const tile = el("figure", "tile");
        const img = el("img");
        img.src = artwork.image_url;
        img.alt = artwork.title;
        tile.appendChild(img);
        tile.appendChild(el("figcaption", undefined, `${artwork.title} - ${artwork.artist}`));
        tile.addEventListener("click", () => handlers.onArtworkTapped(artwork.id));
        grid.appendChild(tile);
      }
      screen.appendChild(grid);
      root.appendChild(screen);
      break;
    }
    case "flash": {
      const screen = el("section", "screen flash");
      if (view.selectedArtwork) {
        const img = el("img", "flash-image");
        img.src = view.selectedArtwork.image_url;
        screen.appendChild(img);
      }
      root.appendChild(screen);
      break;
    }
    case "countdown": {
      const screen = el("section", "screen countdown");
      video.classList.add("camera-preview");
      screen.appendChild(video);
      screen.appendChild(
        el("div", "countdown-number", String(view.secondsRemaining ?? 0)),
      );
      if (view.selectedArtwork) {
        const inset = el("img", "artwork-inset");
        inset.src = view.selectedArtwork.image_url;
        screen.appendChild(inset);
      }
      root.appendChild(screen);
      break;
    }
    case "code": {
      const screen = el("section", "screen code");
      screen.appendChild(el("h2", undefined, "Your pickup code"));
      screen.appendChild(el("div", "code-text", view.codeText ?? ""));
      screen.appendChild(
        el("p", undefined, "Remember this code to find your image, then step out."),
      );
      if (view.resultImageUrl) {
        const img = el("img", "inline-result");
        img.src = view.resultImageUrl;
        screen.appendChild(img);
      }
      root.appendChild(screen);
      break;
    }
    case "retry": {
      const screen = el("section", "screen retry");
      screen.appendChild(el("h2", undefined, "No pose detected"));
      screen.appendChild(el("p", undefined, "Step into the frame and try again."));
      const button = el("button", "primary big-target", "Retry");
      button.addEventListener("click", handlers.onRetryTapped);
      screen.appendChild(button);
      root.appendChild(screen);
      break;
    }
    case "camera-error": {
      const screen = el("section", "screen camera-error");
      screen.appendChild(el("h2", undefined, "Camera unavailable"));
      screen.appendChild(
        el("p", undefined, "Allow camera access in the browser, then pick an artwork again."),
      );
      root.appendChild(screen);
      break;
    }
    default: {
      root.appendChild(el("section", "screen error", "Reconnecting..."));
    }
  }
}
