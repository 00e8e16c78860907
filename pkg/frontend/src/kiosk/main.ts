import { ApiClient } from "../api.js";
import { BrowserCamera } from "./camera.js";
import { renderKiosk } from "./dom.js";
import { KioskController } from "./machine.js";

const params = new URLSearchParams(window.location.search);
const station = params.get("station") ?? "station-1";

const root = document.getElementById("app") as HTMLElement;
const video = document.createElement("video");
video.autoplay = true;
video.muted = true;
video.playsInline = true;

const camera = new BrowserCamera(video);
const controller = new KioskController({
  api: new ApiClient(""),
  station,
  camera,
  render: (view) =>
    renderKiosk(root, video, view, {
      onConsentTapped: () => void controller.onConsentTapped(),
      onArtworkTapped: (id) => void controller.onArtworkTapped(id),
      onRetryTapped: () => void controller.onRetryTapped(),
    }),
});

controller.start();
