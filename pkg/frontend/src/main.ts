import { createApp } from './app.js';

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

const root = document.getElementById('root');
if (root) {
  createApp(root, {
    baseUrl: param('api', 'http://127.0.0.1:8080'),
    token: param('token', window.prompt('broker access token') ?? ''),
  });
}
